"""The eta families and the sporadic eta^ell / eta^3 / mixed congruences.

Case 1 of the family: r = a(ell-1) - 1, f_{r,ell,0} = p_r((ell+r)/24) eta.
Case 2: r = a(ell-1) - 3, f_{r,ell,0} = p_r((3 ell+r)/24) eta^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..arith import PrimeField, primes_between
from ..errors import ExcludedCaseError, HypothesisError, VerificationError
from ..etaforms import ThetaShape, eta_pow, shape_series
from ..partitions import PartitionTable, build_f, pr_mod
from ..qseries import Q24Series, first_difference

__all__ = [
    "FamilyRow",
    "FigurePair",
    "AbnormalInput",
    "family_modulus",
    "family_enumerate",
    "figure_pairs",
    "etafamily_verify",
    "b_value",
    "abnormal_verify",
]

# Largest a admitted by the theorem in each case, and by the tabulated rows.
A_MAX = {1: 21, 2: 19}
A_MAX_TABLE = {1: 23, 2: 21}
_OFFSET = {1: 1, 2: 3}  # r = a(ell-1) - offset; eta exponent is the same number


def family_modulus(a: int, case: int) -> int:
    """M such that the family needs ell = 1 (mod M)."""
    return 24 // math.gcd(24, a + _OFFSET[case])


def family_r(a: int, ell: int, case: int) -> int:
    return a * (ell - 1) - _OFFSET[case]


def _admissible(a: int, ell: int, case: int, a_max: int, cap: bool = True) -> bool:
    a_min = 3 if case == 1 else 1
    if a % 2 == 0 or not a_min <= a <= a_max:
        return False
    if cap and a > 2 * ell + 1:
        return False
    if (ell - 1) % family_modulus(a, case):
        return False
    return family_r(a, ell, case) % ell != 0


@dataclass(frozen=True)
class FamilyRow:
    """One line a of the family table at a prime ell.

    r1 = a(ell-1) - 1 and r2 = (a-2)(ell-1) - 3 share the residue condition
    ell = 1 (mod modulus); either is None where its case does not apply.
    ramanujan tells whether p_{r1}((ell + r1)/24) vanishes mod ell, in which
    case f_{r1,ell,0} = 0 and the congruence is of Ramanujan type.
    """

    ell: int
    a: int
    r1: int | None
    r2: int | None
    modulus: int
    ramanujan: bool | None = None


def _leading(r: int, ell: int, index: int) -> int:
    n = (index + r) // 24
    return pr_mod(r, ell, n)[n]


def family_enumerate(
    ell_max: int, ell_min: int = 5, *, table_rows: bool = False, probe: bool = True
) -> list[FamilyRow]:
    """All family rows with ell_min <= ell <= ell_max, sorted by (ell, a).

    table_rows admits the tabulated extra lines (a = 23 for r1, a = 21 for
    r2), which hold numerically but sit outside the theorem's range.
    """
    if ell_max < 5:
        raise ValueError("ell_max must be at least 5")
    a1 = A_MAX_TABLE[1] if table_rows else A_MAX[1]
    a2 = A_MAX_TABLE[2] if table_rows else A_MAX[2]
    rows = []
    for ell in primes_between(max(ell_min, 5), ell_max):
        for a in range(3, a1 + 3, 2):
            r1 = family_r(a, ell, 1) if _admissible(a, ell, 1, a1) else None
            r2 = family_r(a - 2, ell, 2) if _admissible(a - 2, ell, 2, a2) else None
            if r1 is None and r2 is None:
                continue
            ram = None
            if probe and r1 is not None:
                ram = _leading(r1, ell, ell) == 0
            rows.append(FamilyRow(ell, a, r1, r2, family_modulus(a, 1), ram))
    return rows


@dataclass(frozen=True)
class FigurePair:
    r: int
    ell: int
    a: int
    case: int


def figure_pairs(
    r_max: int = 501,
    ell_min: int = 5,
    ell_max: int = 1583,
    *,
    r_min: int = 1,
    include_case2: bool = False,
) -> list[FigurePair]:
    """Family pairs (r, ell) in a box, sorted by (case, a, ell).

    Lines are r = a(ell-1) - 1 with a odd in 3..21 and ell = 1 mod
    24/(24, a+1).  The a <= 2 ell + 1 cap is not applied here; the few
    pairs it would drop have f_{r,ell,0} = 0.
    """
    out = []
    cases = (1, 2) if include_case2 else (1,)
    primes = primes_between(max(ell_min, 5), ell_max)
    for case in cases:
        for a in range(3 if case == 1 else 1, A_MAX[case] + 1, 2):
            for ell in primes:
                r = family_r(a, ell, case)
                if r > r_max:
                    break
                if r >= r_min and _admissible(a, ell, case, A_MAX[case], cap=False):
                    out.append(FigurePair(r, ell, a, case))
    return out


def etafamily_verify(
    r: int,
    ell: int,
    case: int,
    trunc: int = 2000,
    *,
    table_rows: bool = False,
    table: PartitionTable | None = None,
) -> int:
    """Check f_{r,ell,0} = alpha * eta^(1 or 3) mod ell through trunc; return alpha.

    alpha is the leading partition value p_r((ell + r)/24), resp.
    p_r((3 ell + r)/24).  Side conditions are checked first.
    """
    PrimeField(ell)
    if case not in (1, 2):
        raise ValueError("case must be 1 or 2")
    if r % ell == 0:
        raise ExcludedCaseError(f"{ell} divides r={r}")
    a_max = (A_MAX_TABLE if table_rows else A_MAX)[case]
    a, rem = divmod(r + _OFFSET[case], ell - 1)
    if rem or not _admissible(a, ell, case, a_max):
        raise HypothesisError(
            f"(r, ell) = ({r}, {ell}) is not on a case-{case} line", failed="side conditions"
        )
    e = 1 if case == 1 else 3
    f = build_f(r, ell, 0, trunc, table).series
    n = (e * ell + r) // 24
    alpha = table[n] % ell if table is not None else _leading(r, ell, e * ell)
    target = eta_pow(e, ell, trunc) * alpha
    bad = first_difference(f, target)
    if bad is not None:
        raise VerificationError(
            f"f_({r},{ell},0) differs from {alpha}*eta^{e} at grid index {bad}", index=bad
        )
    return alpha


# ---------------------------------------------------------------------------
# sporadic shapes


def b_value(r: int, ell: int) -> Fraction:
    """(ell-1) * floor((ell + (r(ell^2-1) - 2)/(2 ell)) / (ell-1)) - r ell / 2, exactly."""
    inner = (Fraction(ell) + Fraction(r * (ell * ell - 1) - 2, 2 * ell)) / (ell - 1)
    return (ell - 1) * math.floor(inner) - Fraction(r * ell, 2)


@dataclass(frozen=True)
class AbnormalInput:
    r: int
    ell: int
    b_value: Fraction

    @classmethod
    def of(cls, r: int, ell: int) -> AbnormalInput:
        return cls(r, ell, b_value(r, ell))


def ord_ell(f: Q24Series) -> int | None:
    """Smallest grid index with a coefficient nonzero mod ell (None if none)."""
    return f.order()


def _compare(f: Q24Series, kind: str, ref: int, what: str) -> ThetaShape:
    ell = f.ell
    shape = shape_series(kind, ell, f.trunc)
    alpha = f[ref] * pow(int(shape[ref]), -1, ell) % ell
    if alpha == 0:
        raise VerificationError(f"{what} has zero coefficient at index {ref}", index=ref)
    bad = first_difference(f, shape * alpha)
    if bad is not None:
        raise VerificationError(f"{what} differs from {alpha}*{kind} at grid index {bad}", index=bad)
    b = {"eta": 1, "eta3": 3, "eta_ell": ell, "eta_ell2_minus_eta": 1}[kind]
    return ThetaShape(b, kind, alpha, ell)


def abnormal_verify(
    r: int,
    ell: int,
    case: int,
    trunc: int = 2000,
    *,
    strict: bool = False,
    table: PartitionTable | None = None,
) -> ThetaShape:
    """Check one of the three sporadic shapes for f_{r,ell,0} or f_{r,ell,-1}.

    case 1: b(r,ell) = ell/2, ord(f_0) >= ell, r = -1 mod 24; f_0 = alpha eta^ell.
    case 2: ell^2 = r + 4, f_0 = 0, ord(f_-1) > 0, r = -3 mod 24; f_-1 = alpha eta^3.
    case 3: ell^2 = r + 2, f_0 = beta eta^ell, ord(f_-1) > 0, r = -1 mod 24;
            f_-1 = alpha ((12/ell) eta^(ell^2) - eta).

    The f_0 = 0 condition of case 2 is only enforced with strict=True: the
    listed pair (45, 7) has f_0 nonzero (p_45(1) = 45) yet f_-1 = 2 eta^3.
    """
    PrimeField(ell)
    if r % ell == 0:
        raise ExcludedCaseError(f"{ell} divides r={r}")
    if case not in (1, 2, 3):
        raise ValueError("case must be 1, 2 or 3")

    def need(ok: bool, what: str):
        if not ok:
            raise HypothesisError(f"case {case} hypothesis fails for ({r}, {ell}): {what}", failed=what)

    f0 = build_f(r, ell, 0, trunc, table).series
    if case == 1:
        need(b_value(r, ell) == Fraction(ell, 2), "b(r, ell) = ell/2")
        need(r % 24 == 23, "r = -1 mod 24")
        order = ord_ell(f0)
        need(order is None or order >= ell, "ord(f_0) >= ell")
        return _compare(f0, "eta_ell", ell, f"f_({r},{ell},0)")

    fm = build_f(r, ell, -1, trunc, table).series
    order = ord_ell(fm)
    need(order is None or order > 0, "ord(f_-1) > 0")
    if case == 2:
        need(ell * ell == r + 4, "ell^2 = r + 4")
        need(r % 24 == 21, "r = -3 mod 24")
        if strict:
            need(f0.is_zero(), "f_0 = 0")
        return _compare(fm, "eta3", 3, f"f_({r},{ell},-1)")

    need(ell * ell == r + 2, "ell^2 = r + 2")
    need(r % 24 == 23, "r = -1 mod 24")
    beta = f0[ell] % ell
    need(first_difference(f0, eta_pow(ell, ell, trunc) * beta) is None, "f_0 = beta eta^ell")
    return _compare(fm, "eta_ell2_minus_eta", 1, f"f_({r},{ell},-1)")
