"""Dense q-expansions over Z/ell on the q^(N/24) exponent grid.

Every series stores coefficients a(N) for start <= N <= trunc, where the
coefficient a(N) multiplies q^(N/24).  Integer-weight forms simply live on
multiples of 24.  ``ell == 0`` selects exact integer coefficients (object
arrays of Python ints); that mode is meant for small oracles only.

All series are immutable.  Every operation derives the truncation of its
result from the truncations of its inputs, so a coefficient is never
reported beyond the range in which it is actually known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import inv_mod, is_prime, legendre_table
from .errors import ModulusMismatchError, NotInvertibleError, PrecisionError

__all__ = [
    "Q24Series",
    "SeriesMeta",
    "from_terms",
    "one",
    "zeros",
    "mul",
    "inv",
    "power",
    "u_op",
    "v_op",
    "twist",
    "theta_op",
    "first_difference",
    "agree",
    "convolve_mod",
]

# products of two residues must fit comfortably in int64
_MAX_MODULUS = 1 << 31
_DIRECT_LIMIT = 4_000_000  # len(a) * len(b) below which np.convolve wins
_FFT_BUDGET_BITS = 40


def _normalize(coeffs, ell: int) -> np.ndarray:
    if ell == 0:
        arr = np.array([int(c) for c in np.asarray(coeffs).ravel()], dtype=object)
    else:
        arr = np.asarray(coeffs)
        if arr.dtype == object:
            arr = np.array([int(c) % ell for c in arr.ravel()], dtype=np.int64)
        else:
            arr = np.mod(arr.astype(np.int64, copy=False), ell)
    if arr.ndim != 1 or len(arr) == 0:
        raise ValueError("a series needs at least one stored coefficient")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Q24Series:
    ell: int
    start: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.ell < 0 or self.ell >= _MAX_MODULUS:
            raise ValueError(f"unsupported modulus {self.ell}")
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "coeffs", _normalize(self.coeffs, self.ell))

    @property
    def trunc(self) -> int:
        """Largest N whose coefficient is known."""
        return self.start + len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return self.ell == 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        if n < self.start:
            return 0
        if n > self.trunc:
            raise PrecisionError(f"coefficient {n} is beyond trunc {self.trunc}")
        return int(self.coeffs[n - self.start])

    def __repr__(self):
        terms = [f"{c}*q^({n}/24)" for n, c in self.items()][:6]
        body = " + ".join(terms) if terms else "0"
        return f"Q24Series(ell={self.ell}, [{body} ...], trunc={self.trunc})"

    def items(self):
        """Yield (N, a(N)) for the nonzero stored coefficients."""
        for i in self.nonzero_offsets():
            yield self.start + int(i), int(self.coeffs[i])

    def nonzero_offsets(self) -> np.ndarray:
        if self.exact:
            return np.array([i for i, c in enumerate(self.coeffs) if c != 0], dtype=np.int64)
        return np.flatnonzero(self.coeffs)

    def nonzero_indices(self) -> np.ndarray:
        return self.nonzero_offsets() + self.start

    def is_zero(self) -> bool:
        return len(self.nonzero_offsets()) == 0

    def order(self) -> int | None:
        """Smallest N with a(N) != 0 (the mod-ell order when ell > 0)."""
        nz = self.nonzero_offsets()
        return None if len(nz) == 0 else self.start + int(nz[0])

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for lo <= N <= hi, zero-padded below start."""
        if hi > self.trunc:
            raise PrecisionError(f"window up to {hi} exceeds trunc {self.trunc}")
        dtype = object if self.exact else np.int64
        out = np.zeros(hi - lo + 1, dtype=dtype)
        src_lo = max(lo, self.start)
        if src_lo <= hi:
            out[src_lo - lo :] = self.coeffs[src_lo - self.start : hi - self.start + 1]
        return out

    def truncate(self, trunc: int) -> Q24Series:
        if trunc > self.trunc:
            raise PrecisionError(f"cannot extend trunc {self.trunc} to {trunc}")
        if trunc < self.start:
            return zeros(self.ell, trunc, trunc)
        return Q24Series(self.ell, self.start, self.coeffs[: trunc - self.start + 1])

    def reduce(self, ell: int) -> Q24Series:
        if not self.exact:
            if self.ell == ell:
                return self
            raise ModulusMismatchError("only exact series can be reduced")
        return Q24Series(ell, self.start, self.coeffs)

    def shift(self, k: int) -> Q24Series:
        """Multiply by q^(k/24)."""
        return Q24Series(self.ell, self.start + k, self.coeffs)

    def support_classes(self, modulus: int = 24) -> set[int]:
        return {int(n) % modulus for n in self.nonzero_indices()}

    def _combine(self, other: Q24Series, sign: int) -> Q24Series:
        _check_same_ring(self, other)
        lo = min(self.start, other.start)
        hi = min(self.trunc, other.trunc)
        if hi < lo:
            return zeros(self.ell, lo, lo)
        a = self.window(lo, hi)
        b = other.window(lo, hi)
        return Q24Series(self.ell, lo, a + b if sign > 0 else a - b)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Q24Series(self.ell, self.start, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Q24Series):
            return mul(self, other)
        if isinstance(other, (int, np.integer)):
            if self.exact:
                return Q24Series(0, self.start, self.coeffs * int(other))
            return Q24Series(self.ell, self.start, self.coeffs * (int(other) % self.ell))
        return NotImplemented

    __rmul__ = __mul__


@dataclass(frozen=True)
class SeriesMeta:
    """Weight/multiplier bookkeeping attached to a series (no analytic content).

    weight_times_2 keeps half-integral weights exact; eta_exponent is the r in
    nu_eta^r, reduced mod 24, and fixes the support class N = r (mod 24).
    """

    weight_times_2: int
    eta_exponent: int
    level: int = 1

    def __post_init__(self):
        object.__setattr__(self, "eta_exponent", self.eta_exponent % 24)
        if self.level < 1:
            raise ValueError("level must be positive")

    def supports(self, f: Q24Series) -> bool:
        return f.support_classes() <= {self.eta_exponent}


def _check_same_ring(f: Q24Series, g: Q24Series):
    if f.ell != g.ell:
        raise ModulusMismatchError(f"moduli differ: {f.ell} vs {g.ell}")


def zeros(ell: int, start: int, trunc: int) -> Q24Series:
    dtype = object if ell == 0 else np.int64
    return Q24Series(ell, start, np.zeros(max(trunc - start + 1, 1), dtype=dtype))


def one(ell: int, trunc: int) -> Q24Series:
    return from_terms({0: 1}, ell, trunc, start=0)


def from_terms(terms: dict[int, int], ell: int, trunc: int, start: int | None = None) -> Q24Series:
    """Build a series from a sparse {N: a(N)} mapping."""
    if start is None:
        start = min(terms) if terms else 0
    f = zeros(ell, start, trunc)
    coeffs = f.coeffs.copy()
    for n, c in terms.items():
        if n < start:
            raise ValueError(f"term {n} lies below start {start}")
        if n <= trunc:
            coeffs[n - start] += c
    return Q24Series(ell, start, coeffs)


# ---------------------------------------------------------------------------
# convolution engine


def _fft_convolve(a: np.ndarray, b: np.ndarray, ell: int, n: int) -> np.ndarray:
    la, lb = len(a), len(b)
    size = 1 << (la + lb - 2).bit_length()
    lmin = min(la, lb)
    # split residues into digits so every partial sum stays far inside the
    # 53-bit float mantissa; one digit when ell is small enough already
    ndigits, bits = 1, ell.bit_length()
    while ndigits * lmin * (min(1 << bits, ell) - 1) ** 2 >= (1 << _FFT_BUDGET_BITS):
        ndigits += 1
        bits = -(-ell.bit_length() // ndigits)
    base = 1 << bits
    if ndigits == 1:
        da, db = [a], [b]
    else:
        da = [(a >> (i * bits)) & (base - 1) for i in range(ndigits)]
        db = [(b >> (i * bits)) & (base - 1) for i in range(ndigits)]
    fa = [np.fft.rfft(x.astype(np.float64), size) for x in da]
    fb = [np.fft.rfft(x.astype(np.float64), size) for x in db]
    out = np.zeros(n, dtype=np.int64)
    for s in range(2 * ndigits - 1):
        acc = None
        for i in range(max(0, s - ndigits + 1), min(s, ndigits - 1) + 1):
            term = fa[i] * fb[s - i]
            acc = term if acc is None else acc + term
        raw = np.fft.irfft(acc, size)[:n]
        rounded = np.rint(raw)
        if n and np.max(np.abs(raw - rounded)) > 0.2:
            raise ArithmeticError("FFT rounding error too large")
        part = np.mod(rounded.astype(np.int64), ell)
        weight = pow(base, s, ell) if ndigits > 1 else 1
        out = (out + part * weight) % ell
    return out


def convolve_mod(a: np.ndarray, b: np.ndarray, ell: int, n: int) -> np.ndarray:
    """First n coefficients of the product of coefficient arrays a and b.

    Exact: schoolbook np.convolve for small inputs, digit-split float FFT
    with a rounding check for large ones.  ell == 0 means exact integers.
    """
    a = a[:n]
    b = b[:n]
    if n <= 0 or len(a) == 0 or len(b) == 0:
        return np.zeros(max(n, 0), dtype=object if ell == 0 else np.int64)
    if ell == 0:
        full = np.convolve(a, b)[:n]
        out = np.zeros(n, dtype=object)
        out[: len(full)] = full
        return out
    out = np.zeros(n, dtype=np.int64)
    if len(a) * len(b) <= _DIRECT_LIMIT:
        if min(len(a), len(b)) * (ell - 1) ** 2 < (1 << 62):
            full = np.convolve(a, b)[:n] % ell
        else:
            full = _fft_convolve(a, b, ell, min(n, len(a) + len(b) - 1))
    else:
        full = _fft_convolve(a, b, ell, min(n, len(a) + len(b) - 1))
    out[: len(full)] = full
    return out


def _stride(c: np.ndarray) -> tuple[int, int] | None:
    """(offset, stride) of the nonzero pattern of c; stride 0 for a monomial."""
    nz = np.flatnonzero(c != 0) if c.dtype == object else np.flatnonzero(c)
    if len(nz) == 0:
        return None
    if len(nz) == 1:
        return int(nz[0]), 0
    return int(nz[0]), int(np.gcd.reduce(nz[1:] - nz[0]))


def _mul_arrays(a: np.ndarray, b: np.ndarray, ell: int, n: int) -> np.ndarray:
    """First n coefficients of a*b, compressing a shared arithmetic support."""
    dtype = object if ell == 0 else np.int64
    out = np.zeros(n, dtype=dtype)
    sa, sb = _stride(a[:n]), _stride(b[:n])
    if sa is None or sb is None:
        return out
    (oa, da), (ob, db) = sa, sb
    base = oa + ob
    if base >= n:
        return out
    d = math.gcd(da, db) or n
    m = (n - 1 - base) // d + 1
    prod = convolve_mod(a[oa:n:d], b[ob:n:d], ell, m)
    out[base::d] = prod[: len(range(base, n, d))]
    return out


def mul(f: Q24Series, g: Q24Series) -> Q24Series:
    _check_same_ring(f, g)
    start = f.start + g.start
    trunc = min(f.trunc + g.start, g.trunc + f.start)
    n = trunc - start + 1
    return Q24Series(f.ell, start, _mul_arrays(f.coeffs, g.coeffs, f.ell, n))


def _inverse_array(h: np.ndarray, ell: int, n: int) -> np.ndarray:
    """g with h*g = 1 + O(x^n), by Newton iteration; h[0] must be a unit."""
    c0 = int(h[0])
    if ell == 0:
        if c0 not in (1, -1):
            raise NotInvertibleError("exact inversion needs leading coefficient +-1")
        g = np.array([c0], dtype=object)
    else:
        g = np.array([inv_mod(c0, ell)], dtype=np.int64)
    k = 1
    while k < n:
        k2 = min(2 * k, n)
        e = _mul_arrays(h[:k2], g, ell, k2)
        # e = h*g - 1 vanishes below k; the update is g -= g * e
        corr = _mul_arrays(g, e[k:k2], ell, k2 - k)
        tail = -corr if ell == 0 else (-corr) % ell
        g = np.concatenate([g, tail])
        k = k2
    return g[:n]


def inv(f: Q24Series, out_trunc: int) -> Q24Series:
    """Multiplicative inverse; the result starts at -f.start, ends at out_trunc.

    Raises NotInvertibleError when a(start) is zero mod ell.
    """
    lead = int(f.coeffs[0])
    if lead == 0 or (f.ell and lead % f.ell == 0):
        raise NotInvertibleError("leading coefficient is not invertible")
    n = out_trunc + f.start + 1
    if n < 1:
        raise ValueError("out_trunc lies below the start of the inverse")
    if n > len(f.coeffs):
        raise PrecisionError(
            f"inverse to {out_trunc} needs input trunc {out_trunc + 2 * f.start}, have {f.trunc}"
        )
    st = _stride(f.coeffs[:n])
    d = st[1] if st and st[1] else n
    compressed = _inverse_array(f.coeffs[:n:d], f.ell, (n - 1) // d + 1)
    out = np.zeros(n, dtype=object if f.exact else np.int64)
    out[::d] = compressed
    return Q24Series(f.ell, -f.start, out)


def power(f: Q24Series, e: int, out_trunc: int) -> Q24Series:
    """f**e by binary exponentiation, re-truncated to out_trunc at each step."""
    if e < 0:
        raise ValueError("negative exponents: use inv")
    start = e * f.start
    n = out_trunc - start + 1
    if n < 1:
        return zeros(f.ell, start, start)
    if e > 0 and n > len(f.coeffs):
        raise PrecisionError(
            f"power to {out_trunc} needs input trunc {out_trunc - (e - 1) * f.start}, have {f.trunc}"
        )
    dtype = object if f.exact else np.int64
    result = np.zeros(n, dtype=dtype)
    result[0] = 1
    base = f.coeffs[:n]
    while e:
        if e & 1:
            result = _mul_arrays(result, base, f.ell, n)
        e >>= 1
        if e:
            base = _mul_arrays(base, base, f.ell, n)
    return Q24Series(f.ell, start, result)


def u_op(f: Q24Series, m: int) -> Q24Series:
    """Coefficient N of the result is a(mN)."""
    if m < 1:
        raise ValueError("m must be positive")
    start = -((-f.start) // m)
    trunc = f.trunc // m
    if trunc < start:
        return zeros(f.ell, start, start)
    return Q24Series(f.ell, start, f.coeffs[m * start - f.start : m * trunc - f.start + 1 : m])


def v_op(f: Q24Series, m: int) -> Q24Series:
    """a(N) moves to index mN; indices between multiples of m are zero."""
    if m < 1:
        raise ValueError("m must be positive")
    n = m * len(f.coeffs)
    out = np.zeros(n, dtype=object if f.exact else np.int64)
    out[::m] = f.coeffs
    # the next unknown coefficient is m * (f.trunc + 1)
    return Q24Series(f.ell, m * f.start, out)


def twist(f: Q24Series, q: int) -> Q24Series:
    """Multiply a(N) by the quadratic character (N/q) for a prime q >= 5."""
    if q < 5 or not is_prime(q):
        raise ValueError(f"twist needs a prime >= 5, got {q}")
    idx = np.arange(f.start, f.trunc + 1, dtype=np.int64) % q
    chi = legendre_table(q)[idx]
    if f.exact:
        chi = chi.astype(object)
    return Q24Series(f.ell, f.start, f.coeffs * chi)


def theta_op(f: Q24Series, iterations: int = 1) -> Q24Series:
    """Apply q d/dq `iterations` times: a(N) -> (N/24)^iterations a(N)."""
    if f.exact:
        raise ValueError("theta_op works mod ell only (1/24 is needed)")
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    ell = f.ell
    inv24 = inv_mod(24, ell)
    idx = np.arange(f.start, f.trunc + 1, dtype=np.int64)
    base = (idx % ell) * inv24 % ell
    table = np.array([pow(x, iterations, ell) for x in range(ell)], dtype=np.int64)
    return Q24Series(ell, f.start, f.coeffs * table[base])


def first_difference(f: Q24Series, g: Q24Series, upto: int | None = None) -> int | None:
    """Smallest N <= min(truncs, upto) where f and g differ, else None."""
    _check_same_ring(f, g)
    lo = min(f.start, g.start)
    hi = min(f.trunc, g.trunc)
    if upto is not None:
        hi = min(hi, upto)
    if hi < lo:
        return None
    diff = np.flatnonzero(f.window(lo, hi) != g.window(lo, hi))
    return None if len(diff) == 0 else lo + int(diff[0])


def agree(f: Q24Series, g: Q24Series, upto: int | None = None) -> bool:
    return first_difference(f, g, upto) is None
