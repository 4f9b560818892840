"""Periodic maps Z -> Z/p^k and the g-special condition.

A map phi is g-special when it has difference-degree <= g+1 and
phi(m^2 n) = m^(2g) phi(n) for all integers n, m.  Both conditions are
linear, so for a fixed period p^N the g-special maps form the kernel of a
linear system over Z/p^k.  The verifiers below compute that kernel and
test the arithmetic lemmas on every element of it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Callable

import numpy as np

from . import linalg, smith
from .reports import FAIL, HYPOTHESIS_NOT_MET, PASS, Report, gated_status
from .residue_arith import is_prime

DEFAULT_PERIOD_LIMIT = 125
DEFAULT_ENUMERATION_LIMIT = 1024
SPOT_CHECKS = 1000


@dataclass(frozen=True)
class PeriodicMap:
    """A map Z -> Z/p^k factoring through Z/p^N, stored as its value table."""

    p: int
    k: int
    N: int
    values: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 1 or self.N < 0:
            raise ValueError("need k >= 1 and N >= 0")
        if len(self.values) != self.p**self.N:
            raise ValueError(f"table length {len(self.values)} != p^N = {self.p ** self.N}")
        mod = self.p**self.k
        object.__setattr__(self, "values", tuple(int(v) % mod for v in self.values))

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @property
    def period(self) -> int:
        return self.p**self.N

    def __call__(self, n: int) -> int:
        return self.values[n % self.period]

    @classmethod
    def from_function(cls, p, k, N, f: Callable[[int], int]) -> "PeriodicMap":
        return cls(p, k, N, tuple(f(n) for n in range(p**N)))

    @classmethod
    def zero(cls, p, k, N) -> "PeriodicMap":
        return cls(p, k, N, (0,) * p**N)

    @classmethod
    def monomial(cls, p, k, N, e: int) -> "PeriodicMap":
        """n -> n^e, with 0^0 = 1."""
        mod = p**k
        return cls.from_function(p, k, N, lambda n: pow(n, e, mod))

    def is_zero(self) -> bool:
        return not any(self.values)

    def _same_space(self, other: "PeriodicMap"):
        if (self.p, self.k, self.N) != (other.p, other.k, other.N):
            raise ValueError("maps live in different spaces")

    def __add__(self, other: "PeriodicMap") -> "PeriodicMap":
        self._same_space(other)
        return PeriodicMap(self.p, self.k, self.N, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "PeriodicMap") -> "PeriodicMap":
        self._same_space(other)
        return PeriodicMap(self.p, self.k, self.N, tuple(a - b for a, b in zip(self.values, other.values)))

    def __rmul__(self, c: int) -> "PeriodicMap":
        return PeriodicMap(self.p, self.k, self.N, tuple(c * a for a in self.values))

    def to_json(self):
        return {"p": self.p, "k": self.k, "N": self.N, "values": list(self.values)}


def difference(phi: PeriodicMap) -> PeriodicMap:
    """(delta phi)(n) = phi(n+1) - phi(n)."""
    v = phi.values
    return PeriodicMap(phi.p, phi.k, phi.N, tuple(v[(n + 1) % len(v)] - v[n] for n in range(len(v))))


def degree(phi: PeriodicMap) -> int:
    """Least l >= 0 with delta^(l+1) phi = 0.  The zero map has degree 0.

    delta^(k p^N) kills every map here, since (S-1)^(p^N) = S^(p^N)-1 = 0 mod p
    for the shift S; the loop bound is therefore exact.
    """
    cur = difference(phi)
    l = 0
    bound = phi.k * phi.period
    while not cur.is_zero():
        l += 1
        if l > bound:  # pragma: no cover - excluded by the argument above
            raise ArithmeticError("difference sequence did not terminate")
        cur = difference(cur)
    return l


@dataclass(frozen=True)
class Verdict:
    """Boolean answer together with the first violation found."""

    holds: bool
    witness: dict | None = None

    def __bool__(self):
        return self.holds


def _m_range(p: int, k: int, N: int) -> int:
    # phi(m^2 n) depends on m mod p^N and m^(2g) mod p^k on m mod p^k
    return p ** max(N, k)


def is_g_special(phi: PeriodicMap, g: int) -> Verdict:
    if g < 1:
        raise ValueError("g must be >= 1")
    d = degree(phi)
    if d > g + 1:
        return Verdict(False, {"reason": "degree", "degree": d})
    mod, P = phi.modulus, phi.period
    for n in range(P):
        for m in range(_m_range(phi.p, phi.k, phi.N)):
            if phi(m * m * n) != pow(m, 2 * g, mod) * phi(n) % mod:
                return Verdict(False, {"reason": "multiplicativity", "n": n, "m": m})
    return Verdict(True)


def is_weakly_special(phi: PeriodicMap, g: int) -> Verdict:
    """Degree <= g+1 and phi(m^2) = m^(2g) phi(1) for all m prime to p."""
    d = degree(phi)
    if d > g + 1:
        return Verdict(False, {"reason": "degree", "degree": d})
    mod = phi.modulus
    for m in range(_m_range(phi.p, phi.k, phi.N)):
        if m % phi.p and phi(m * m) != pow(m, 2 * g, mod) * phi(1) % mod:
            return Verdict(False, {"reason": "square-values", "m": m})
    return Verdict(True)


# -- the linear systems -------------------------------------------------------


def difference_rows(p: int, k: int, N: int, order: int) -> np.ndarray:
    """Matrix of delta^order acting on value tables (cyclic)."""
    P, mod = p**N, p**k
    A = np.zeros((P, P), dtype=np.int64)
    for j in range(order + 1):
        c = (-1) ** (order - j) * comb(order, j) % mod
        for n in range(P):
            A[n, (n + j) % P] = (A[n, (n + j) % P] + c) % mod
    return A


def multiplicativity_rows(p: int, k: int, N: int, g: int) -> np.ndarray:
    """Rows e_(m^2 n) - m^(2g) e_n over all n mod p^N and all m (deduplicated)."""
    P, mod = p**N, p**k
    pairs = sorted({(m * m % P, pow(m, 2 * g, mod)) for m in range(_m_range(p, k, N))})
    rows = []
    for n in range(P):
        for sq, scale in pairs:
            row = np.zeros(P, dtype=np.int64)
            row[sq * n % P] += 1
            row[n] -= scale
            rows.append(row % mod)
    A = np.unique(np.array(rows, dtype=np.int64), axis=0)
    return A[A.any(axis=1)]


def square_value_rows(p: int, k: int, N: int, g: int) -> np.ndarray:
    """Rows e_(m^2) - m^(2g) e_1 for m prime to p."""
    P, mod = p**N, p**k
    pairs = sorted({(m * m % P, pow(m, 2 * g, mod)) for m in range(_m_range(p, k, N)) if m % p})
    rows = []
    for sq, scale in pairs:
        row = np.zeros(P, dtype=np.int64)
        row[sq] += 1
        row[1 % P] -= scale
        rows.append(row % mod)
    A = np.array(rows, dtype=np.int64).reshape(len(rows), P)
    return A[A.any(axis=1)]


def special_system(p: int, k: int, N: int, g: int, weak: bool = False) -> np.ndarray:
    parts = [difference_rows(p, k, N, g + 2)]
    parts.append(square_value_rows(p, k, N, g) if weak else multiplicativity_rows(p, k, N, g))
    A = np.vstack(parts)
    return A[A.any(axis=1)]


@dataclass
class SpecialKernel:
    """The group of (weakly) g-special maps with period p^N and values in Z/p^k."""

    p: int
    k: int
    N: int
    g: int
    weak: bool
    generators: list[PeriodicMap]
    size: int
    elements: list[PeriodicMap] | None = None

    def contains_monomial(self) -> bool:
        """Whether n -> n^g lies in the kernel (true whenever it is p^N-periodic)."""
        mono = PeriodicMap.monomial(self.p, self.k, self.N, self.g)
        verdict = is_weakly_special(mono, self.g) if self.weak else is_g_special(mono, self.g)
        return verdict.holds


def _enumerate_span(gens: list[PeriodicMap], p, k, N, size: int) -> list[PeriodicMap]:
    mod = p**k
    seen = {PeriodicMap.zero(p, k, N).values}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for gmap in gens:
                w = tuple((a + b) % mod for a, b in zip(v, gmap.values))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    if len(seen) != size:  # pragma: no cover - sanity check on the kernel order
        raise ArithmeticError(f"enumerated {len(seen)} elements, expected {size}")
    return [PeriodicMap(p, k, N, v) for v in sorted(seen)]


def special_kernel(
    p: int,
    k: int,
    N: int,
    g: int,
    *,
    weak: bool = False,
    period_limit: int = DEFAULT_PERIOD_LIMIT,
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> SpecialKernel:
    """Kernel of the stacked system {delta^(g+2) phi = 0} + multiplicativity."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p**N > period_limit:
        raise ValueError(f"period p^N = {p ** N} exceeds the enumeration limit {period_limit}")
    A = special_system(p, k, N, g, weak)
    K = linalg.kernel_mod_prime_power(A, p, k)
    gens = [PeriodicMap(p, k, N, tuple(row)) for row in K.generators]
    elements = None
    if K.order <= enumeration_limit:
        elements = _enumerate_span(gens, p, k, N, K.order)
    return SpecialKernel(p, k, N, g, weak, gens, K.order, elements)


@dataclass
class KernelCrossCheck:
    agree: bool
    size_by_elimination: int
    size_by_lattice: int
    rref_agrees: bool | None  # only meaningful for k = 1


def cross_check_kernel(p: int, k: int, N: int, g: int, weak: bool = False) -> KernelCrossCheck:
    """Compare the local-ring kernel with independent routes.

    Every generator is re-evaluated against the system, the kernel order is
    recomputed from the HNF of rowspan(A) + p^k Z^n, and the order of the
    subgroup the generators span is recomputed the same way.  Equal orders
    plus containment give equality of the two subgroups.  For k = 1 the
    F_p row-reduction basis is compared with the elimination basis as well.
    """
    A = special_system(p, k, N, g, weak)
    mod, P = p**k, p**N
    K = linalg.kernel_mod_prime_power(A, p, k)
    contained = bool(((A @ K.generators.T) % mod == 0).all()) if len(K.generators) else True
    lattice_size = smith.kernel_order_mod(A.tolist(), mod, P)
    span_size = smith.subgroup_order_mod(K.generators.tolist(), mod, P)
    rref_ok = None
    if k == 1:
        basis = linalg.kernel_mod_prime(A, p)
        rref_ok = linalg.same_subspace_mod_prime(basis, K.generators, p, P)
    agree = contained and lattice_size == K.order == span_size and rref_ok is not False
    return KernelCrossCheck(agree, K.order, lattice_size, rref_ok)


# -- reports -----------------------------------------------------------------


@dataclass
class SpecialityReport(Report):
    kernel_generators: list[PeriodicMap] = field(default_factory=list)
    kernel_size: int = 0

    def to_dict(self):
        d = super().to_dict()
        d["kernel_size"] = self.kernel_size
        d["kernel_generators"] = [list(m.values) for m in self.kernel_generators]
        return d


def _residual(phi: PeriodicMap, g: int, n: int) -> int:
    """phi(n) - n^g phi(1) mod p^k."""
    mod = phi.modulus
    return (phi(n) - pow(n, g, mod) * phi(1)) % mod


def _recheck_annihilation(phi: PeriodicMap, g: int, n: int, scale: int) -> Callable[[], bool]:
    def recheck() -> bool:
        # direct evaluation through the table, no shared helpers
        mod = phi.p**phi.k
        lhs = phi.values[n % len(phi.values)] - (n**g) * phi.values[1 % len(phi.values)]
        return (scale * lhs) % mod != 0

    return recheck


def _annihilation_scan(kernel: SpecialKernel, g: int, scale: int):
    """First (map, n) where scale*(phi(n) - n^g phi(1)) != 0, else None."""
    mod = kernel.p**kernel.k
    for phi in kernel.generators:
        for n in range(phi.period):
            if scale * _residual(phi, g, n) % mod:
                return phi, n
    return None


def spot_check(kernel: SpecialKernel, rng: random.Random, count: int = SPOT_CHECKS) -> int:
    """Re-test the defining identities at random (n, m) on every generator.

    Returns the number of violations found (expected 0).
    """
    g, mod = kernel.g, kernel.p**kernel.k
    bad = 0
    diff = difference_rows(kernel.p, kernel.k, kernel.N, g + 2)
    for phi in kernel.generators:
        vec = np.array(phi.values, dtype=np.int64)
        bad += int(((diff @ vec) % mod).any())
        for _ in range(count):
            n = rng.randrange(-10**6, 10**6)
            m = rng.randrange(1 if kernel.weak else -10**6, 10**6)
            if kernel.weak:
                if m % kernel.p and phi(m * m) != pow(m, 2 * g, mod) * phi(1) % mod:
                    bad += 1
            elif phi(m * m * n) != pow(m, 2 * g, mod) * phi(n) % mod:
                bad += 1
    return bad


def _build_report(
    check_id: str,
    params: dict,
    kernel: SpecialKernel,
    hypothesis_met: bool,
    scale: int,
    seed: int,
    extra: dict | None = None,
) -> SpecialityReport:
    g = kernel.g
    found = _annihilation_scan(kernel, g, scale)
    ok = found is None
    witness = {"kernel_size": kernel.size, "annihilator": scale}
    if extra:
        witness.update(extra)
    notes = []
    if not hypothesis_met:
        notes.append("hypothesis not satisfied; result is exploratory")
        witness["exploratory_result"] = PASS if ok else FAIL
    counterexample = None
    recheck = None
    if not ok:
        phi, n = found
        counterexample = {"map": phi, "n": n, "value": _residual(phi, g, n) * scale % phi.modulus}
        recheck = _recheck_annihilation(phi, g, n, scale)
    elif hypothesis_met:
        witness["spot_check_violations"] = spot_check(kernel, random.Random(seed))
        if witness["spot_check_violations"]:
            ok = False
    return SpecialityReport(
        check_id=check_id,
        params=params,
        status=gated_status(hypothesis_met, ok),
        witness=witness,
        counterexample=counterexample,
        notes=notes,
        recheck=recheck,
        kernel_generators=kernel.generators,
        kernel_size=kernel.size,
    )


def verify_lemma_ar1(p: int, k: int, N: int, g: int, seed: int = 0) -> SpecialityReport:
    """Every g-special map equals n -> n^g phi(1)   (needs p >= 2g+1, p != 3)."""
    hyp = p >= 2 * g + 1 and p != 3
    K = special_kernel(p, k, N, g)
    extra = {"monomial_in_kernel": K.contains_monomial(), "expected_size": p**k}
    return _build_report("ar1", dict(p=p, k=k, N=N, g=g), K, hyp, 1, seed, extra)


def verify_lemma_modp(p: int, N: int, g: int, seed: int = 0) -> SpecialityReport:
    """Over F_p the g-special maps lie in span{n^g, n^(g-(p-1)/2)}."""
    hyp = p > 3 and (p - 1) // 2 < g < 2 * p - 1 and p % 2 == 1
    K = special_kernel(p, 1, N, g)
    P = p**N
    low = g - (p - 1) // 2
    span = [PeriodicMap.monomial(p, 1, N, g)]
    if low >= 0:
        span.append(PeriodicMap.monomial(p, 1, N, low))
    S = np.array([m.values for m in span], dtype=np.int64)
    G = np.array([m.values for m in K.generators], dtype=np.int64).reshape(-1, P)
    r_span = linalg.rank_mod_prime(S, p)
    r_both = linalg.rank_mod_prime(np.vstack([S, G]), p)
    ok = r_both == r_span
    witness = {"kernel_size": K.size, "kernel_dimension": linalg.rank_mod_prime(G, p), "span_exponents": [g, low]}
    counterexample = None
    recheck = None
    if not ok:
        for phi in K.generators:
            if linalg.rank_mod_prime(np.vstack([S, [phi.values]]), p) > r_span:
                counterexample = {"map": phi}

                def recheck(phi=phi):
                    # brute force over all coefficient pairs
                    for a in range(p):
                        for b in range(p):
                            combo = [(a * x + b * y) % p for x, y in zip(S[0], S[-1])]
                            if combo == list(phi.values):
                                return False
                    return True

                break
    if not hyp:
        witness["exploratory_result"] = PASS if ok else FAIL
    return SpecialityReport(
        check_id="modp",
        params=dict(p=p, N=N, g=g),
        status=gated_status(hyp, ok),
        witness=witness,
        counterexample=counterexample,
        notes=[] if hyp else ["hypothesis not satisfied; result is exploratory"],
        recheck=recheck,
        kernel_generators=K.generators,
        kernel_size=K.size,
    )


def verify_lemma_modp2(p: int, g: int, N: int = 2, seed: int = 0) -> SpecialityReport:
    """p * (phi(n) - n^g phi(1)) = 0 for g-special maps into Z/p^2 of period p^2."""
    hyp = p > 3 and (p + 1) / 2 < g < (3 * p - 1) / 2 and N == 2
    K = special_kernel(p, 2, N, g)
    return _build_report("modp2", dict(p=p, g=g, N=N), K, hyp, p, seed)


def verify_theorem_ar2(p: int, k: int, N: int, g: int, seed: int = 0) -> SpecialityReport:
    hyp = p > 3 and g < (3 * p - 1) / 2 and 2 * g != p + 1
    K = special_kernel(p, k, N, g)
    return _build_report("ar2", dict(p=p, k=k, N=N, g=g), K, hyp, p, seed)


def verify_p2_annihilation(p: int, k: int = 3, N: int | None = None, seed: int = 0) -> SpecialityReport:
    """p^2 annihilates phi(n) - n^g phi(1) when g = (p+1)/2."""
    if N is None:
        N = 3 if p**3 <= DEFAULT_PERIOD_LIMIT else 2
    g = (p + 1) // 2
    hyp = p > 3 and k <= 3 and p % 2 == 1
    K = special_kernel(p, k, N, g)
    return _build_report("p2-annihilation", dict(p=p, k=k, N=N, g=g), K, hyp, p * p, seed)


def verify_weak_proposition(
    p: int, k: int, N: int, g: int, exponent: int | None = None, seed: int = 0
) -> SpecialityReport:
    """p^n(p,g) annihilates f(n) - n^g f(1) on weakly special maps."""
    if exponent is None:
        from .bounds import n_p_g

        exponent = n_p_g(p, g)
    K = special_kernel(p, k, N, g, weak=True)
    return _build_report(
        "weak-prop", dict(p=p, k=k, N=N, g=g), K, True, p**exponent, seed, {"exponent": exponent}
    )


def minimal_annihilating_exponent(kernel: SpecialKernel) -> int:
    """Least e with p^e (phi(n) - n^g phi(1)) = 0 on the whole kernel."""
    e = 0
    while _annihilation_scan(kernel, kernel.g, kernel.p**e) is not None:
        e += 1
    return e


__all__ = [
    "HYPOTHESIS_NOT_MET",
    "PeriodicMap",
    "SpecialKernel",
    "SpecialityReport",
    "Verdict",
    "cross_check_kernel",
    "degree",
    "difference",
    "is_g_special",
    "is_weakly_special",
    "minimal_annihilating_exponent",
    "special_kernel",
    "spot_check",
    "verify_lemma_ar1",
    "verify_lemma_modp",
    "verify_lemma_modp2",
    "verify_p2_annihilation",
    "verify_theorem_ar2",
    "verify_weak_proposition",
]
