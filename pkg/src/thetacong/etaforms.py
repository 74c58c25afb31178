"""Eta products, Eisenstein series and level-one modular forms mod ell.

Integer-weight forms are Q24Series supported on multiples of 24.  Form-space
linear algebra works on the ordinary q-expansion (coefficient of q^n at
position n); ``trunc`` arguments of the form-space functions count those
integer powers of q, while series-producing functions take grid truncations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import divisor_power_sums, inv_mod, kronecker, squarefree_part
from .errors import (
    EmptySpaceError,
    InconsistentInputError,
    InsufficientDataError,
    ModulusMismatchError,
    PrecisionError,
)
from .qseries import Q24Series, agree, inv, one, power

__all__ = [
    "ThetaShape",
    "FormSpace",
    "THETA_KINDS",
    "eta_series",
    "eta_pow",
    "delta_series",
    "e4_e6_series",
    "dim_modular_forms",
    "dim_cusp_forms",
    "form_space",
    "miller_basis",
    "filtration",
    "cusp_member",
    "theta_detect",
    "shape_series",
]

THETA_KINDS = ("eta", "eta3", "eta_ell", "eta_ell2_minus_eta")


@lru_cache(maxsize=64)
def eta_series(ell: int, trunc: int) -> Q24Series:
    """eta = sum_k (-1)^k q^((6k-1)^2/24) over all integers k (pentagonal numbers)."""
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    terms = {}
    k = 0
    while True:
        hit = False
        for kk in (k, -k) if k else (0,):
            n = (6 * kk - 1) ** 2
            if n <= trunc:
                terms[n] = -1 if kk % 2 else 1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    dtype = object if ell == 0 else np.int64
    coeffs = np.zeros(trunc, dtype=dtype)
    for n, c in terms.items():
        coeffs[n - 1] = c
    return Q24Series(ell, 1, coeffs)


@lru_cache(maxsize=256)
def eta_pow(e: int, ell: int, trunc: int) -> Q24Series:
    """eta^e to grid truncation trunc; negative e goes through series inversion."""
    if e == 0:
        return one(ell, trunc)
    if e > 0:
        if trunc < e:
            return Q24Series(ell, e, [0]).truncate(trunc)
        return power(eta_series(ell, trunc - e + 1), e, trunc)
    return inv(eta_pow(-e, ell, trunc - 2 * e), trunc)


def delta_series(ell: int, trunc: int) -> Q24Series:
    return eta_pow(24, ell, trunc)


@lru_cache(maxsize=16)
def e4_e6_series(trunc: int) -> tuple[Q24Series, Q24Series]:
    """Exact E4 = 1 + 240 sum sigma_3(n) q^n and E6 = 1 - 504 sum sigma_5(n) q^n."""
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    n_max = max(trunc // 24, 1)
    s3 = divisor_power_sums(n_max, 3)
    s5 = divisor_power_sums(n_max, 5)
    e4 = np.zeros(trunc + 1, dtype=object)
    e6 = np.zeros(trunc + 1, dtype=object)
    e4[0] = e6[0] = 1
    for n in range(1, trunc // 24 + 1):
        e4[24 * n] = 240 * s3[n]
        e6[24 * n] = -504 * s5[n]
    return Q24Series(0, 0, e4), Q24Series(0, 0, e6)


def dim_modular_forms(k: int) -> int:
    if k < 0 or k % 2:
        return 0
    return k // 12 if k % 12 == 2 else k // 12 + 1


def dim_cusp_forms(k: int) -> int:
    return max(dim_modular_forms(k) - 1, 0)


def _monomials(k: int) -> list[tuple[int, int, int]]:
    """Exponents (a, b, c) of the triangular basis E4^a E6^b Delta^c of M_k."""
    out = []
    for c in range(k // 12 + 1):
        j = k - 12 * c
        if j == 2:
            continue
        b = 0 if j % 4 == 0 else 1
        out.append(((j - 6 * b) // 4, b, c))
    return out


def _qcoeffs(f: Q24Series, n_terms: int) -> np.ndarray:
    """Coefficients of q^0 .. q^(n_terms-1) of an integer-grid series."""
    return f.window(0, 24 * (n_terms - 1))[::24]


@lru_cache(maxsize=64)
def _generators(ell: int, trunc: int):
    e4, e6 = e4_e6_series(24 * trunc)
    delta = delta_series(0, 24 * trunc)
    if ell:
        return e4.reduce(ell), e6.reduce(ell), delta.reduce(ell)
    return e4, e6, delta


@dataclass(frozen=True, eq=False)
class FormSpace:
    """M_k over F_ell (or Z when ell == 0) through q^trunc.

    basis_matrix holds E4^a E6^b Delta^c row by row; echelon is its reduced
    form, whose rows are the Miller basis (row 0 is the non-cusp element).
    """

    weight: int
    ell: int
    trunc: int
    monomials: tuple[tuple[int, int, int], ...]
    basis_matrix: np.ndarray
    echelon: np.ndarray
    dim_M: int = field(default=0)
    dim_S: int = field(default=0)

    def coordinates(self, v: np.ndarray) -> np.ndarray | None:
        """Echelon coordinates of a q-coefficient vector, or None if not in the span."""
        if len(v) < self.dim_M:
            raise PrecisionError("not enough coefficients to solve")
        v = np.asarray(v)
        coords = v[: self.dim_M].copy()
        n = min(len(v), self.trunc + 1)
        residual = v[:n].copy()
        for i, c in enumerate(coords):
            residual = residual - c * self.echelon[i, :n]
        if self.ell:
            residual %= self.ell
            coords %= self.ell
        if any(x != 0 for x in residual):
            return None
        return coords

    def contains(self, v: np.ndarray) -> bool:
        return self.coordinates(v) is not None


@lru_cache(maxsize=256)
def form_space(k: int, ell: int, trunc: int) -> FormSpace:
    if k < 0 or k % 2:
        raise ValueError(f"weight must be even and non-negative, got {k}")
    mons = _monomials(k)
    d = len(mons)
    if trunc + 1 < d:
        raise PrecisionError(f"trunc {trunc} cannot separate {d} basis forms")
    dtype = object if ell == 0 else np.int64
    rows = np.zeros((d, trunc + 1), dtype=dtype)
    if d:
        e4, e6, delta = _generators(ell, trunc)
        grid = 24 * trunc
        for i, (a, b, c) in enumerate(mons):
            g = power(e4, a, grid) * power(e6, b, grid) * power(delta, c, grid)
            rows[i] = _qcoeffs(g.truncate(grid), trunc + 1)
    # rows are unit upper triangular in columns 0..d-1; clear above the pivots
    ech = rows.copy()
    for j in range(d - 1, -1, -1):
        for i in range(j):
            c = ech[i, j]
            if c:
                ech[i] = ech[i] - c * ech[j]
                if ell:
                    ech[i] %= ell
    rows.setflags(write=False)
    ech.setflags(write=False)
    return FormSpace(k, ell, trunc, tuple(mons), rows, ech, d, max(d - 1, 0))


def miller_basis(k: int, ell: int, trunc: int) -> list[Q24Series]:
    """Cusp forms f_1..f_d of weight k with a_i(j) = delta_ij for 1 <= i, j <= d."""
    space = form_space(k, ell, trunc)
    if space.dim_S == 0:
        raise EmptySpaceError(f"S_{k} is zero")
    out = []
    for i in range(1, space.dim_M):
        grid = np.zeros(24 * trunc + 1, dtype=object if ell == 0 else np.int64)
        grid[::24] = space.echelon[i]
        out.append(Q24Series(ell, 0, grid))
    return out


def _integer_grid_vector(f: Q24Series, n_terms: int) -> np.ndarray:
    if f.support_classes() - {0}:
        raise ValueError("series is not supported on integer powers of q")
    if f.trunc < 24 * (n_terms - 1):
        raise PrecisionError(f"need trunc {24 * (n_terms - 1)}, have {f.trunc}")
    return _qcoeffs(f, n_terms)


def filtration(f: Q24Series, k_start: int, ell: int) -> int:
    """Smallest weight k' = k_start (mod ell-1) whose space contains f mod ell.

    f must already lie in M_{k_start}; membership at each weight is a linear
    solve on the first k_start // 12 + 2 coefficients, which suffices by the
    Sturm bound at weight k_start.
    """
    if f.ell != ell:
        raise ModulusMismatchError("series modulus differs from ell")
    n_terms = k_start // 12 + 2
    v = _integer_grid_vector(f, n_terms)
    if not form_space(k_start, ell, n_terms - 1).contains(v):
        raise InconsistentInputError(f"series is not in M_{k_start} mod {ell}")
    best = k_start
    for k in range(k_start - (ell - 1), -1, -(ell - 1)):
        if form_space(k, ell, n_terms - 1).contains(v):
            best = k
    return best


def cusp_member(
    f: Q24Series, half_weight_times_2: int, eta_exp: int, ell: int
) -> tuple[bool, tuple[int, ...] | None]:
    """Decide f in S_{k/2}(nu_eta^n) mod ell for k = half_weight_times_2, n = eta_exp.

    f * eta^(24-n) lands in S_{12+(k-n)/2}; the certificate is its coordinate
    vector in the Miller basis of that space.
    """
    if f.ell != ell:
        raise ModulusMismatchError("series modulus differs from ell")
    if not 0 <= eta_exp < 24:
        raise ValueError("eta_exp must lie in [0, 24)")
    if f.support_classes() - {eta_exp}:
        return False, None
    g = f * eta_pow(24 - eta_exp, ell, f.trunc + 24 - eta_exp)
    weight2 = half_weight_times_2 + 24 - eta_exp
    if weight2 % 4 or weight2 < 0:
        return (True, ()) if g.is_zero() else (False, None)
    k = weight2 // 2
    n_avail = g.trunc // 24 + 1
    if n_avail < k // 12 + 2:
        raise PrecisionError(f"weight {k} needs {k // 12 + 2} coefficients, have {n_avail}")
    v = _integer_grid_vector(g, n_avail)
    if (v[0] % ell if ell else v[0]) != 0:
        return False, None
    space = form_space(k, ell, n_avail - 1)
    coords = space.coordinates(v)
    if coords is None:
        return False, None
    return True, tuple(int(c) for c in coords[1:])


@dataclass(frozen=True)
class ThetaShape:
    """A series supported on N = b n^2, optionally matched to a known shape.

    kind is one of THETA_KINDS, or None when the support is theta-like but no
    listed shape fits; scalar is the alpha in alpha * shape.
    """

    b: int
    kind: str | None
    scalar: int
    ell: int


def shape_series(kind: str, ell: int, trunc: int) -> Q24Series:
    if kind == "eta":
        return eta_pow(1, ell, trunc)
    if kind == "eta3":
        return eta_pow(3, ell, trunc)
    if kind == "eta_ell":
        return eta_pow(ell, ell, trunc)
    if kind == "eta_ell2_minus_eta":
        big = eta_pow(ell * ell, ell, trunc) * kronecker(12, ell)
        return big - eta_pow(1, ell, trunc)
    raise ValueError(f"unknown shape {kind!r}")


# (shape, squarefree stretch b, index of the reference coefficient)
def _shape_candidates(ell: int):
    return (("eta", 1, 1), ("eta3", 3, 3), ("eta_ell", ell, ell), ("eta_ell2_minus_eta", 1, 1))


def match_shape(f: Q24Series, kind: str, ref_index: int) -> int | None:
    """alpha with f == alpha * shape through f.trunc, or None."""
    ell = f.ell
    if f.trunc < ref_index:
        return None
    shape = shape_series(kind, ell, f.trunc)
    ref = shape[ref_index]
    if ref % ell == 0:
        return None
    alpha = f[ref_index] * inv_mod(ref, ell) % ell
    if alpha and agree(f, shape * alpha):
        return alpha
    return None


def theta_detect(f: Q24Series, min_terms: int = 5) -> ThetaShape | None:
    nz = [int(n) for n in f.nonzero_indices()]
    if len(nz) < min_terms:
        raise InsufficientDataError(f"only {len(nz)} nonzero coefficients")
    if nz[0] <= 0:
        return None
    b = squarefree_part(nz[0])
    for n in nz:
        q, rem = divmod(n, b)
        if rem or math.isqrt(q) ** 2 != q:
            return None
    if f.ell:
        for kind, shape_b, ref in _shape_candidates(f.ell):
            if shape_b == b:
                alpha = match_shape(f, kind, ref)
                if alpha is not None:
                    return ThetaShape(b, kind, alpha, f.ell)
    return ThetaShape(b, None, 0, f.ell)
