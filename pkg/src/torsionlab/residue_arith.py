"""Exact arithmetic over Z and Z/mZ.

p-adic valuations, Legendre symbols and the small congruence solvers
(sums of squares congruent to -1) used by the isogeny arguments.
All solvers are exhaustive or table driven and return the
lexicographically smallest witness so that reports are reproducible.
"""

from __future__ import annotations

import itertools

import numpy as np
from dataclasses import dataclass


def is_prime(n: int) -> bool:
    """Deterministic trial division; adequate for the small primes used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if is_prime(q)]


@dataclass(frozen=True)
class ResidueElement:
    """An element of Z/mZ, always stored reduced."""

    modulus: int
    value: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, ResidueElement):
            if other.modulus != self.modulus:
                raise ValueError("moduli differ")
            return other.value
        return int(other)

    def __add__(self, other):
        return ResidueElement(self.modulus, self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ResidueElement(self.modulus, self.value - self._coerce(other))

    def __rsub__(self, other):
        return ResidueElement(self.modulus, self._coerce(other) - self.value)

    def __mul__(self, other):
        return ResidueElement(self.modulus, self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return ResidueElement(self.modulus, -self.value)

    def __pow__(self, e: int):
        return ResidueElement(self.modulus, pow(self.value, e, self.modulus))

    def inverse(self) -> "ResidueElement":
        # raises ValueError when not a unit
        return ResidueElement(self.modulus, pow(self.value, -1, self.modulus))

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class PrimePower:
    p: int
    k: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 1:
            raise ValueError(f"exponent must be >= 1, got {self.k}")

    @property
    def modulus(self) -> int:
        return self.p**self.k


def p_adic_valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n."""
    if n == 0:
        raise ValueError("infinite valuation")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def legendre_symbol(n: int, p: int) -> int:
    """Legendre symbol (n/p) for an odd prime p, via the Jacobi reciprocity algorithm."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"legendre_symbol needs an odd prime, got {p}")
    a = n % p
    m = p
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def _smallest_roots(modulus: int) -> dict[int, int]:
    """Map each square residue to its smallest square root."""
    roots: dict[int, int] = {}
    for x in range(modulus):
        roots.setdefault(x * x % modulus, x)
    return roots


def _hensel_two_squares(p: int, N: int) -> tuple[int, int]:
    # lift a mod-p solution with n a unit by adjusting n only
    n0, m0 = solve_two_squares_neg1(p, 1)
    if n0 % p == 0:
        n0, m0 = m0, n0
    mod = p
    n, m = n0, m0
    for _ in range(1, N):
        mod *= p
        f = (n * n + m * m + 1) % mod
        # n -> n + t*(mod/p) with 2 n t (mod/p) = -f
        step = mod // p
        t = (-(f // step) * pow(2 * n, -1, p)) % p
        n = (n + t * step) % mod
    return n, m


# table lookup above this size gets expensive; Hensel lifting is used instead
_TABLE_LIMIT = 10**6


def solve_two_squares_neg1(p: int, N: int) -> tuple[int, int]:
    """Lexicographically smallest (n, m) mod p**N with n^2 + m^2 = -1.

    Above the table limit the answer comes from Hensel lifting and is a
    valid witness but not necessarily the lexicographic minimum.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if N < 1:
        raise ValueError("N must be >= 1")
    mod = p**N
    if mod > _TABLE_LIMIT:
        return _hensel_two_squares(p, N)
    roots = _smallest_roots(mod)
    for n in range(mod):
        m = roots.get((-1 - n * n) % mod)
        if m is not None:
            return n, m
    raise ArithmeticError(f"no solution mod {p}^{N}")  # impossible for odd p


def solve_binary_form_neg1(l: int, N: int) -> tuple[int, int] | None:
    """Smallest (a, b) mod N with a^2 + l*b^2 = -1, or None when unsolvable."""
    if l < 1 or N < 1:
        raise ValueError("l and N must be positive")
    if N == 1:
        return 0, 0
    for a in range(N):
        # l*b^2 = -1 - a^2; scan b since l need not be invertible
        target = (-1 - a * a) % N
        for b in range(N):
            if l * b * b % N == target:
                return a, b
    return None


def solve_four_squares_neg1(N: int) -> tuple[int, int, int, int]:
    """Smallest (n, m, p, q) mod N with n^2+m^2+p^2+q^2 = -1."""
    if N < 2:
        raise ValueError("N must be >= 2")
    # smallest square root of each residue, -1 when there is none
    root = np.full(N, -1, dtype=np.int64)
    for x in range(N - 1, -1, -1):
        root[x * x % N] = x
    # residues that are sums of two squares: cyclic self-convolution of the
    # square indicator, done in floating point FFT and rounded
    ind = (root >= 0).astype(float)
    conv = np.rint(np.fft.irfft(np.fft.rfft(ind) ** 2, n=N)).astype(np.int64)
    two_ok = conv > 0

    def smallest_pair(t):
        for c in range(N):
            d = root[(t - c * c) % N]
            if d >= 0:
                return c, int(d)
        raise AssertionError("sumset and root table disagree")

    for a, b in itertools.product(range(N), repeat=2):
        t = (-1 - a * a - b * b) % N
        if two_ok[t]:
            return (a, b) + smallest_pair(t)
    raise ArithmeticError(f"no four-square solution mod {N}")
