"""Ruling out theta-type congruences p_r(ell m n + t) = 0 (mod ell).

For fixed (r, ell, delta) we collect tvalues: positive t with
(r(r-24t) / ell) = delta and p_r(t) nonzero mod ell.  A prime m is ruled out
once tvalues holds t_+ and t_- with (r(r-24t) / m) = +1 and -1; by the square
class structure and the m'' reduction no t in the delta class then admits a
congruence at modulus ell*m.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..arith import PrimeField, factorize, inv_mod, is_squarefree, legendre_table, primes_between
from ..errors import ExcludedCaseError, InsufficientDataError, PrecisionError
from ..etaforms import ThetaShape, theta_detect
from ..partitions import PartitionTable, TableCache, build_f, pr_mod

log = logging.getLogger(__name__)

STATUSES = ("ruled_out", "candidate", "trivial_ramanujan")


@dataclass(frozen=True)
class SearchVerdict:
    """Outcome of the search for one (r, ell, m, delta).

    For ruled_out, t_plus and t_minus are the witnesses (both None when m
    divides r and the reduction alone settles it).  For a candidate,
    surviving is the square class mod m that never met a witness: +1, -1,
    or 0 when no t with nonzero class was seen at all.
    """

    r: int
    ell: int
    m: int
    delta: int
    status: str
    t_plus: int | None = None
    t_minus: int | None = None
    surviving: int | None = None
    budget_limited: bool = False
    notes: str = ""

    def key(self):
        return (self.r, self.ell, self.delta, self.m)


def _table(r: int, ell: int, n_max: int, cache: TableCache | None) -> PartitionTable:
    if cache is not None:
        return cache.get(r, ell, n_max)
    return pr_mod(r, ell, n_max)


def ramanujan_check(r: int, ell: int, n_probe: int = 2000, cache: TableCache | None = None) -> bool:
    """True when p_r(ell k + t0) = 0 mod ell for 0 <= k < n_probe, t0 = r/24 mod ell.

    These are the coefficients of f_{r,ell,0}.  The probe widens gradually,
    so a nonzero value near the start is found without a long table.
    """
    PrimeField(ell)
    if r % ell == 0:
        raise ExcludedCaseError(f"{ell} divides r={r}")
    t0 = r * inv_mod(24, ell) % ell
    k = min(64, n_probe)
    while True:
        n_max = t0 + ell * (k - 1)
        table = _table(r, ell, n_max, cache)
        if np.any(np.asarray(table.values[t0 : n_max + 1 : ell])):
            return False
        if k >= n_probe:
            return True
        k = min(8 * k, n_probe)


def _tvalues(table: PartitionTable, r: int, ell: int, delta: int, t_max: int) -> np.ndarray:
    t = np.arange(1, t_max + 1, dtype=np.int64)
    vals = np.asarray(table.values[1 : t_max + 1])
    cls = legendre_table(ell)[(r * (r - 24 * t)) % ell]
    return t[(vals != 0) & (cls == delta)]


def _class_key(r: int, t, m: int):
    """Residue whose quadratic character mod m sorts t into square classes.

    This is r(r - 24t) as usual; when m divides r that is always 0 and the
    class of N = 24t - r is used instead.
    """
    if r % m == 0:
        return (24 * t - r) % m
    return (r * (r - 24 * t)) % m


def _first_of(mask: np.ndarray, t: np.ndarray) -> int | None:
    idx = np.flatnonzero(mask)
    return int(t[idx[0]]) if idx.size else None


def rule_out_search(
    r: int,
    ell: int,
    delta: int,
    m_min: int = 5,
    m_max: int = 200,
    t_budget: int = 100_000,
    *,
    n_probe: int = 2000,
    min_evidence: int = 32,
    t_start: int = 4096,
    cache: TableCache | None = None,
) -> list[SearchVerdict]:
    """One verdict per prime m in [m_min, m_max] with m != ell and m >= 5.

    The t range starts at t_start and doubles up to t_budget until every
    undecided m has min_evidence values of t outside the zero class mod m.
    Undecided m below that count are flagged budget_limited.  When the
    delta class itself vanishes mod ell every m is reported trivial.
    """
    PrimeField(ell)
    if r % 2 == 0:
        raise ValueError("r must be odd")
    if r % ell == 0:
        raise ExcludedCaseError(f"{ell} divides r={r}")
    if delta not in (-1, 0, 1):
        raise ValueError("delta must be -1, 0 or 1")
    ms = [m for m in primes_between(max(m_min, 5), m_max) if m != ell]
    if not ms:
        return []
    # A Ramanujan-type congruence only trivializes the square class it lives
    # in: the zero class here, a nonzero class when no tvalue turns up below.
    if delta == 0 and ramanujan_check(r, ell, n_probe, cache):
        note = f"f_(r,ell,0) vanishes to {n_probe} terms"
        return [SearchVerdict(r, ell, m, delta, "trivial_ramanujan", notes=note) for m in ms]

    verdicts: dict[int, SearchVerdict] = {}
    plus: dict[int, int | None] = {}
    minus: dict[int, int | None] = {}

    t_max = min(t_start, t_budget)
    while True:
        table = _table(r, ell, t_max, cache)
        t = _tvalues(table, r, ell, delta, t_max)
        undecided = []
        for m in ms:
            if m in verdicts:
                continue
            cls = legendre_table(m)[_class_key(r, t, m)]
            tp, tm = _first_of(cls == 1, t), _first_of(cls == -1, t)
            if tp is not None and tm is not None:
                verdicts[m] = SearchVerdict(r, ell, m, delta, "ruled_out", tp, tm)
                continue
            plus[m], minus[m] = tp, tm
            undecided.append((m, int(np.count_nonzero(cls))))
        weak = [m for m, count in undecided if count < min_evidence]
        if not weak or t_max >= t_budget:
            break
        t_max = min(2 * t_max, t_budget)

    if t.size == 0:
        note = f"f_(r,ell,{delta}) vanishes up to t={t_max}"
        for m, _ in undecided:
            verdicts[m] = SearchVerdict(r, ell, m, delta, "trivial_ramanujan", notes=note)
        undecided = []
    for m, count in undecided:
        surviving = -1 if plus[m] is not None else (1 if minus[m] is not None else 0)
        limited = count < min_evidence
        note = f"{count} witnesses in one class up to t={t_max}"
        if r % m == 0:
            note += "; classes of 24t-r mod m"
        verdicts[m] = SearchVerdict(
            r, ell, m, delta, "candidate", plus[m], minus[m], surviving, limited, note
        )
    return [verdicts[m] for m in ms]


def classify_candidate(r: int, ell: int, delta: int, trunc: int = 2000) -> ThetaShape | None:
    """theta_detect on f_{r,ell,delta}; None when the support is not theta-like."""
    f = build_f(r, ell, delta, trunc).series
    try:
        return theta_detect(f)
    except InsufficientDataError:
        return None


def describe_shape(shape: ThetaShape | None) -> str:
    if shape is None:
        return "theta_detect: none"
    return f"theta_detect: {shape.kind or 'unlisted'} b={shape.b} alpha={shape.scalar}"


@dataclass
class SearchTask:
    r: int
    ell: int
    deltas: tuple[int, ...]
    m_min: int
    m_max: int
    t_budget: int
    n_probe: int = 2000
    min_evidence: int = 32
    trunc: int = 2000
    cache_dir: str | None = None


def run_task(task: SearchTask) -> list[SearchVerdict]:
    """All verdicts for one (r, ell), candidates annotated with their theta shape."""
    cache = TableCache(task.cache_dir)
    out = []
    for delta in task.deltas:
        verdicts = rule_out_search(
            task.r,
            task.ell,
            delta,
            task.m_min,
            task.m_max,
            task.t_budget,
            n_probe=task.n_probe,
            min_evidence=task.min_evidence,
            cache=cache,
        )
        if any(v.status == "candidate" for v in verdicts):
            note = describe_shape(classify_candidate(task.r, task.ell, delta, task.trunc))
            verdicts = [
                _with_note(v, note) if v.status == "candidate" else v for v in verdicts
            ]
        out.extend(verdicts)
    return out


def _with_note(v: SearchVerdict, note: str) -> SearchVerdict:
    notes = f"{v.notes}; {note}" if v.notes else note
    return SearchVerdict(
        v.r, v.ell, v.m, v.delta, v.status, v.t_plus, v.t_minus, v.surviving, v.budget_limited, notes
    )


def search_grid(tasks: list[SearchTask], threads: int = 1) -> list[SearchVerdict]:
    """Run tasks, in worker processes when threads > 1; output sorted by key."""
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run_task, tasks))
    else:
        chunks = [run_task(task) for task in tasks]
    return sorted((v for chunk in chunks for v in chunk), key=SearchVerdict.key)


# ---------------------------------------------------------------------------
# modulus reduction and brute force


def reduce_modulus(r: int, t: int, m: int, ell: int) -> tuple[int, int]:
    """Split m = m' * m'' with m'' the part of m dividing r - 24t.

    For m coprime to r this is the part dividing r(r - 24t).  A prime p of m
    dividing r but not t stays in m': its square class is that of 24t - r,
    and e.g. p_17(119n + 22) = 0 mod 7 holds while p_17(7n + 22) = 0 does not.
    """
    if m < 1 or not is_squarefree(m):
        raise ValueError(f"m={m} is not squarefree")
    if math.gcd(m, 6 * ell) != 1:
        raise ValueError(f"m={m} is not coprime to 6*{ell}")
    if r % ell == 0:
        raise ExcludedCaseError(f"{ell} divides r={r}")
    x = r - 24 * t
    m2 = 1
    if m > 1:
        for p in factorize(m):
            if x % p == 0:
                m2 *= p
    return m // m2, m2


def brute_verify(
    r: int, ell: int, m: int, t: int, n_max: int, table: PartitionTable | None = None
) -> bool:
    """True iff p_r(ell m n + t) = 0 mod ell for every 0 <= n <= n_max."""
    top = ell * m * n_max + t
    if table is None:
        table = pr_mod(r, ell, max(top, 0))
    elif table.ell != ell:
        table = table.reduce(ell)
    if table.n_max < top:
        raise PrecisionError(f"table reaches n={table.n_max}, need {top}")
    step = ell * m
    first = t if t >= 0 else t % step
    vals = np.asarray(table.values[first : top + 1 : step])
    return not np.any(vals)
