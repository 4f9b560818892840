"""Explicit annihilation constants.

All arithmetic is on Python integers; N(g) leaves int64 already for g = 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, gcd

from .residue_arith import is_prime, p_adic_valuation, primes_up_to


@dataclass
class BoundBreakdown:
    d: int
    g: int
    exponents: dict[int, int]  # odd primes p | d, p = 3 mod 4, p <= max(2g-1, 3)
    n2: int
    d_prime: int
    total_bound: int
    notes: list[str] = field(default_factory=list)

    def to_json(self):
        return {
            "d": self.d,
            "g": self.g,
            "exponents": {str(p): e for p, e in self.exponents.items()},
            "n2": self.n2,
            "d_prime": self.d_prime,
            "total_bound": self.total_bound,
            "notes": list(self.notes),
        }


def torsion_bound_exponents(d: int, g: int) -> BoundBreakdown:
    """Exponents n_p, n_2 and the bound 2^n2 * d'.

    For odd p | d with p = 3 mod 4 and p <= max(2g-1, 3):
      n_p = 1       if p != 3 and (2g+1)/3 < p < 2g-1,
      n_p = 2       if p = 2g-1 != 3,
      n_p = v_p(d)  otherwise.
    n_2 = 2 + 3 v_2(d).  The inequalities are strict.
    """
    if d < 1 or g < 1:
        raise ValueError("d and g must be positive")
    exps: dict[int, int] = {}
    notes: list[str] = []
    for p in primes_up_to(max(2 * g - 1, 3)):
        if p == 2 or p % 4 != 3 or d % p:
            continue
        if p != 3 and 2 * g + 1 < 3 * p and p < 2 * g - 1:
            exps[p] = 1
        elif p == 2 * g - 1 and p != 3:
            exps[p] = 2
        else:
            exps[p] = p_adic_valuation(d, p)
            if 3 * p == 2 * g + 1:
                notes.append(f"p={p} sits on the boundary (2g+1)/3; strict inequality gives n_p = v_p(d)")
            if p == 3 and p == 2 * g - 1:
                notes.append("p=3=2g-1 is excluded from the n_p=2 case; n_3 = v_3(d)")
    d_prime = 1
    for p, e in exps.items():
        d_prime *= p**e
    n2 = 2 + 3 * (p_adic_valuation(d, 2) if d % 2 == 0 else 0)
    return BoundBreakdown(d, g, exps, n2, d_prime, 2**n2 * d_prime, notes)


def faltings_chai_bound(d: int) -> int:
    if d < 1:
        raise ValueError("d must be positive")
    return 4 * d**3


def first_squares_coprime(p: int, count: int) -> list[int]:
    """The first `count` squares m^2 (m >= 1) with p not dividing m."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    m = 1
    while len(out) < count:
        if m % p:
            out.append(m * m)
        m += 1
    return out


def vandermonde(nodes) -> int:
    """prod_{i<j} (n_j - n_i)."""
    out = 1
    for j in range(len(nodes)):
        for i in range(j):
            out *= nodes[j] - nodes[i]
    return out


def _valuation_of_product(factors, p) -> int:
    return sum(p_adic_valuation(f, p) for f in factors)


def n_p_g(p: int, g: int) -> int:
    """v_p((g+1)! * Vandermonde(first g+2 squares prime to p)).

    Summed factor by factor so no huge product is formed; the big-integer
    route is kept in ``n_p_g_direct`` as an oracle.
    """
    if not is_prime(p) or g < 1:
        raise ValueError("need a prime p and g >= 1")
    nodes = first_squares_coprime(p, g + 2)
    diffs = [nodes[j] - nodes[i] for j in range(len(nodes)) for i in range(j)]
    return _valuation_of_product(range(2, g + 2), p) + _valuation_of_product(diffs, p)


def n_p_g_direct(p: int, g: int) -> int:
    return p_adic_valuation(factorial(g + 1) * vandermonde(first_squares_coprime(p, g + 2)), p)


def variant_n_p_g_with_zero(p: int) -> int:
    """v_p of the Vandermonde on 0 and the first g+1 squares prime to p, g = (p+1)/2."""
    if p <= 3 or not is_prime(p):
        raise ValueError("need a prime p > 3")
    g = (p + 1) // 2
    return p_adic_valuation(vandermonde([0] + first_squares_coprime(p, g + 1)), p)


def big_N_of_g(g: int) -> int:
    """prod over primes p <= 2g-1 of p^n(p,g)."""
    out = 1
    for p in primes_up_to(2 * g - 1):
        out *= p ** n_p_g(p, g)
    return out


def optimal_corollary_bound(d: int, g: int, three_type_is_1113k: bool) -> int:
    """12 if the 3-type is (1,...,1,3^k) with k > 0, else 4; odd d only."""
    if d < 1 or g < 1:
        raise ValueError("d and g must be positive")
    if d % 2 == 0:
        raise ValueError("corollary inapplicable: d must be odd")
    return 12 if three_type_is_1113k else 4


def bound_divides_faltings_chai(d: int, g: int) -> bool:
    b = torsion_bound_exponents(d, g).total_bound
    return faltings_chai_bound(d) % b == 0


def bound_gcd(d: int, g: int) -> int:
    """gcd of the two available annihilators."""
    return gcd(torsion_bound_exponents(d, g).total_bound, faltings_chai_bound(d))
