"""Modular arithmetic, quadratic symbols and divisor-sum sieves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotInvertibleError

__all__ = [
    "PrimeField",
    "SigmaTable",
    "kronecker",
    "legendre_table",
    "sigma_sieve",
    "divisor_power_sums",
    "inv_mod",
    "is_prime",
    "primes_between",
    "factorize",
    "is_squarefree",
    "squarefree_part",
]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3 * 10**24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi, by sieve."""
    if hi < 2 or hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(hi) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(sieve) if p >= lo]


@dataclass(frozen=True)
class PrimeField:
    """The field Z/ell for a prime ell >= 5; elements are kept in [0, ell)."""

    ell: int

    def __post_init__(self):
        if self.ell < 5 or not is_prime(self.ell):
            raise ValueError(f"ell must be a prime >= 5, got {self.ell}")

    def __call__(self, a: int) -> int:
        return a % self.ell

    def inv(self, a: int) -> int:
        return inv_mod(a, self.ell)


def inv_mod(a: int, ell: int) -> int:
    if a % ell == 0:
        raise NotInvertibleError(f"{a} is not invertible mod {ell}")
    return pow(a, -1, ell)


def _jacobi(a: int, n: int) -> int:
    # n odd and positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for all integers a and n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    k = 1
    while n % 2 == 0:
        n //= 2
        if a % 8 in (3, 5):
            k = -k
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    return k * _jacobi(a, n)


@lru_cache(maxsize=256)
def legendre_table(q: int) -> np.ndarray:
    """Array chi with chi[x] = (x/q) for 0 <= x < q, q an odd prime.

    Lets callers evaluate the symbol on whole index arrays at once.
    """
    chi = -np.ones(q, dtype=np.int64)
    chi[0] = 0
    squares = (np.arange(1, q, dtype=np.int64) ** 2) % q
    chi[squares] = 1
    chi.setflags(write=False)
    return chi


@dataclass(frozen=True)
class SigmaTable:
    """values[n] = sigma(n) for 1 <= n <= n_max; values[0] is 0 by convention."""

    n_max: int
    values: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


def divisor_power_sums(n_max: int, power: int = 1) -> list[int]:
    """Exact sigma_power(n) for 0 <= n <= n_max (entry 0 is 0)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = d**power
        for multiple in range(d, n_max + 1, d):
            out[multiple] += dp
    return out


def sigma_sieve(n_max: int) -> SigmaTable:
    return SigmaTable(n_max, tuple(divisor_power_sums(n_max, 1)))


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of |n| by trial division (n != 0)."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).values())


def squarefree_part(n: int) -> int:
    """The squarefree s > 0 with n = s * k**2 (n > 0)."""
    s = 1
    for p, e in factorize(n).items():
        if e % 2:
            s *= p
    return s
