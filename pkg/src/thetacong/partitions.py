"""Colored partition numbers p_r(n) and their generating functions f_{r,ell,delta}."""

from __future__ import annotations

import hashlib
import logging
import threading
from dataclasses import dataclass
from functools import lru_cache
from operator import mul as _imul
from pathlib import Path

import numpy as np

from .arith import PrimeField, legendre_table, sigma_sieve
from .errors import ExcludedCaseError, PrecisionError, ThetaCongError
from .etaforms import eta_pow
from .qseries import Q24Series, SeriesMeta, mul, u_op, zeros

log = logging.getLogger(__name__)

__all__ = [
    "PartitionTable",
    "GenFunc",
    "pr_exact",
    "pr_mod",
    "build_f",
    "build_f0_via_lemma",
    "genfunc_weight_times_2",
    "TableCache",
    "write_prtable",
    "read_prtable",
    "prtable_path",
    "ChecksumError",
]


@dataclass(frozen=True, eq=False)
class PartitionTable:
    """p_r(n) for 0 <= n <= n_max; ell is None for exact big integers."""

    r: int
    ell: int | None
    n_max: int
    values: tuple[int, ...] | np.ndarray

    def __getitem__(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.n_max:
            raise IndexError(f"p_{self.r}({n}) is beyond n_max {self.n_max}")
        return int(self.values[n])

    def reduce(self, ell: int) -> PartitionTable:
        if self.ell is not None:
            if self.ell == ell:
                return self
            raise ValueError("can only reduce an exact table")
        vals = np.array([v % ell for v in self.values], dtype=np.int64)
        vals.setflags(write=False)
        return PartitionTable(self.r, ell, self.n_max, vals)

    def head(self, n_max: int) -> PartitionTable:
        if n_max > self.n_max:
            raise IndexError("table too short")
        return PartitionTable(self.r, self.ell, n_max, self.values[: n_max + 1])


@lru_cache(maxsize=64)
def pr_exact(r: int, n_max: int) -> PartitionTable:
    """Exact p_r(n) from n p_r(n) = r * sum_{j<n} p_r(j) sigma(n-j)."""
    if r < 1 or n_max < 0:
        raise ValueError("need r >= 1 and n_max >= 0")
    sig = sigma_sieve(max(n_max, 1)).values
    p = [1]
    for n in range(1, n_max + 1):
        total = r * sum(map(_imul, p, sig[n:0:-1]))
        q, rem = divmod(total, n)
        if rem:
            raise AssertionError(f"inexact division at n={n}")
        p.append(q)
    return PartitionTable(r, None, n_max, tuple(p))


def pr_mod(r: int, ell: int, n_max: int) -> PartitionTable:
    """p_r(n) mod ell as the coefficients of eta^(-r) at N = 24n - r."""
    if r < 1 or n_max < 0:
        raise ValueError("need r >= 1 and n_max >= 0")
    PrimeField(ell)
    g = eta_pow(-r, ell, 24 * n_max - r)
    vals = np.array(g.coeffs[::24], dtype=np.int64)
    vals.setflags(write=False)
    return PartitionTable(r, ell, n_max, vals)


def genfunc_weight_times_2(r: int, ell: int, delta: int) -> int:
    if delta == 0:
        return r * (ell * ell - ell - 1)
    return r * ell * (ell * ell - ell - 1)


@dataclass(frozen=True, eq=False)
class GenFunc:
    r: int
    ell: int
    delta: int
    series: Q24Series
    meta: SeriesMeta


def _check_pair(r: int, ell: int):
    PrimeField(ell)
    if r < 1:
        raise ValueError("r must be positive")
    if r % ell == 0:
        raise ExcludedCaseError(f"{ell} divides r={r}")


def build_f(r: int, ell: int, delta: int, trunc: int, table: PartitionTable | None = None) -> GenFunc:
    """f_{r,ell,delta} from partition values, straight from its defining sum.

    delta = 0 keeps the coefficients p_r((ell N + r)/24); delta = -1 / +1 keep
    p_r((N + r)/24) where (-rN / ell) equals delta.
    """
    _check_pair(r, ell)
    if delta not in (0, -1, 1):
        raise ValueError("delta must be 0, -1 or 1")
    if delta == 0:
        cls = (-r * ell) % 24
        lo = -(r // ell)  # ceil(-r / ell)
        start = lo + (cls - lo) % 24
        need = (ell * trunc + r) // 24
    else:
        start = -r
        need = (trunc + r) // 24
    meta = SeriesMeta(genfunc_weight_times_2(r, ell, delta), -r * ell if delta == 0 else -r)
    if trunc < start:
        return GenFunc(r, ell, delta, zeros(ell, trunc, trunc), meta)
    if table is None:
        table = pr_mod(r, ell, max(need, 0))
    elif table.ell != ell:
        table = table.reduce(ell)
    if table.n_max < need:
        raise PrecisionError(f"table reaches n={table.n_max}, need {need}")
    vals = np.asarray(table.values[: need + 1], dtype=np.int64)
    idx = np.arange(start, trunc + 1, 24, dtype=np.int64)
    coeffs = np.zeros(trunc - start + 1, dtype=np.int64)
    if delta == 0:
        coeffs[::24] = vals[(ell * idx + r) // 24]
    else:
        chi = legendre_table(ell)[(-r * idx) % ell]
        coeffs[::24] = np.where(chi == delta, vals[(idx + r) // 24], 0)
    return GenFunc(r, ell, delta, Q24Series(ell, start, coeffs), meta)


def build_f0_via_lemma(r: int, ell: int, trunc: int) -> Q24Series:
    """f_{r,ell,0} as (Delta^(r(ell^2-1)/24) | U_ell) / eta^(r ell) mod ell."""
    _check_pair(r, ell)
    e = r * (ell * ell - 1)  # eta exponent of the Delta power
    numerator = u_op(eta_pow(e, ell, ell * (trunc + r * ell)), ell)
    return mul(numerator, eta_pow(-r * ell, ell, trunc)).truncate(trunc)


# ---------------------------------------------------------------------------
# PRTABLE disk cache


class ChecksumError(ThetaCongError):
    pass


def prtable_path(cache_dir: Path | str, r: int, ell: int | None) -> Path:
    return Path(cache_dir) / f"prtable_r{r}_ell{ell or 0}.txt"


def _prtable_body(table: PartitionTable) -> bytes:
    header = f"PRTABLE 1 r={table.r} ell={table.ell or 0} nmax={table.n_max}\n"
    lines = "".join(f"{int(v)}\n" for v in table.values)
    return (header + lines).encode()


def write_prtable(path: Path | str, table: PartitionTable) -> None:
    body = _prtable_body(table)
    digest = hashlib.sha256(body).hexdigest()
    path = Path(path)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(body + f"CHECKSUM sha256={digest}\n".encode())
    tmp.replace(path)


def read_prtable(path: Path | str) -> PartitionTable:
    data = Path(path).read_bytes()
    body, sep, tail = data.rpartition(b"CHECKSUM sha256=")
    if not sep or hashlib.sha256(body).hexdigest() != tail.decode().strip():
        raise ChecksumError(f"checksum mismatch in {path}")
    lines = body.decode().splitlines()
    fields = dict(tok.split("=") for tok in lines[0].split()[2:])
    if not lines[0].startswith("PRTABLE 1 "):
        raise ChecksumError(f"bad header in {path}")
    r, ell, n_max = int(fields["r"]), int(fields["ell"]), int(fields["nmax"])
    raw = [int(x) for x in lines[1:]]
    if len(raw) != n_max + 1:
        raise ChecksumError(f"{path} holds {len(raw)} values, header says {n_max + 1}")
    if ell == 0:
        return PartitionTable(r, None, n_max, tuple(raw))
    vals = np.array(raw, dtype=np.int64)
    vals.setflags(write=False)
    return PartitionTable(r, ell, n_max, vals)


class TableCache:
    """Thread-safe store of partition tables keyed by (r, ell).

    Tables grow by doubling on demand.  With a cache_dir, tables found on disk
    are reused and newly built ones are written back.  With build=False a
    missing table is an error instead.
    """

    def __init__(self, cache_dir: Path | str | None = None, initial: int = 4096, build: bool = True):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.initial = initial
        self.build = build
        self._tables: dict[tuple[int, int], PartitionTable] = {}
        self._lock = threading.Lock()

    def get(self, r: int, ell: int, n_max: int) -> PartitionTable:
        key = (r, ell)
        with self._lock:
            have = self._tables.get(key)
        if have is not None and have.n_max >= n_max:
            return have
        if have is None and self.cache_dir is not None:
            path = prtable_path(self.cache_dir, r, ell)
            if path.exists():
                have = read_prtable(path)
                if have.n_max >= n_max:
                    with self._lock:
                        self._tables[key] = have
                    return have
        if not self.build:
            raise FileNotFoundError(f"no cached table for r={r}, ell={ell} reaching n={n_max}")
        size = max(self.initial, n_max)
        if have is not None:
            size = max(size, 2 * have.n_max)
        table = pr_mod(r, ell, size)
        if self.cache_dir is not None:
            write_prtable(prtable_path(self.cache_dir, r, ell), table)
        with self._lock:
            self._tables[key] = table
        return table
