"""Dense polynomials over Z/p^k and their (t-1)-adic valuation.

Used for the power sums S_r(t) = sum_{n<p} n^r t^n (with 0^0 = 1) and for
the generating polynomial Q(t) = sum phi(n) t^n of a periodic map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, factorial

from .reports import FAIL, PASS, Report
from .residue_arith import is_prime
from .special_maps import PeriodicMap, degree


@dataclass(frozen=True)
class PolyOverZpk:
    """Polynomial with coefficients mod p^k; coeffs[i] is the t^i coefficient."""

    p: int
    k: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        mod = self.p**self.k
        c = [int(x) % mod for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @property
    def degree(self) -> float:
        """-inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "PolyOverZpk"):
        if (self.p, self.k) != (other.p, other.k):
            raise ValueError("polynomials over different rings")

    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return PolyOverZpk(self.p, self.k, tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return PolyOverZpk(self.p, self.k, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return PolyOverZpk(self.p, self.k, tuple(other * x for x in self.coeffs))
        self._check(other)
        if self.is_zero() or other.is_zero():
            return PolyOverZpk(self.p, self.k, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyOverZpk(self.p, self.k, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = PolyOverZpk(self.p, self.k, (1,))
        for _ in range(e):
            out = out * self
        return out

    def derivative(self) -> "PolyOverZpk":
        return PolyOverZpk(self.p, self.k, tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def shift(self, s: int) -> "PolyOverZpk":
        """Multiply by t^s."""
        return PolyOverZpk(self.p, self.k, (0,) * s + self.coeffs)

    def substitute_power(self, e: int) -> "PolyOverZpk":
        """Q(t) -> Q(t^e)."""
        out = [0] * (e * max(len(self.coeffs) - 1, 0) + 1)
        for i, c in enumerate(self.coeffs):
            out[i * e] = c
        return PolyOverZpk(self.p, self.k, tuple(out))

    def divmod(self, divisor: "PolyOverZpk") -> tuple["PolyOverZpk", "PolyOverZpk"]:
        """Long division by a monic divisor (valid over any Z/p^k)."""
        self._check(divisor)
        if divisor.is_zero() or divisor.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        mod = self.modulus
        r = list(self.coeffs)
        d = len(divisor.coeffs) - 1
        q = [0] * max(len(r) - d, 0)
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i] % mod
            if c:
                q[i - d] = c
                for j, b in enumerate(divisor.coeffs):
                    r[i - d + j] -= c * b
        return PolyOverZpk(self.p, self.k, tuple(q)), PolyOverZpk(self.p, self.k, tuple(r[:d]))

    def divisible_by(self, divisor: "PolyOverZpk") -> bool:
        return self.divmod(divisor)[1].is_zero()

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.modulus
        return acc

    def to_json(self):
        return {"p": self.p, "k": self.k, "coeffs": list(self.coeffs)}


def t_minus_one(p: int, k: int = 1, power: int = 1) -> PolyOverZpk:
    """(t-1)^power, expanded by the binomial theorem."""
    return PolyOverZpk(p, k, tuple((-1) ** (power - i) * comb(power, i) for i in range(power + 1)))


def power_sum_poly(r: int, p: int) -> PolyOverZpk:
    """S_r(t) over F_p with the convention 0^0 = 1."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return PolyOverZpk(p, 1, tuple(pow(n, r, p) for n in range(p)))


def _synthetic_divide_by_t_minus_1(coeffs: list[int], p: int) -> tuple[list[int], int]:
    """Quotient and remainder of Q(t) / (t - 1) over F_p (Horner at t = 1)."""
    q = [0] * (len(coeffs) - 1)
    acc = 0
    for i in range(len(coeffs) - 1, 0, -1):
        acc = (acc + coeffs[i]) % p
        q[i - 1] = acc
    return q, (acc + coeffs[0]) % p


def t1_valuation(Q: PolyOverZpk) -> float:
    """Multiplicity of the root t = 1 over F_p; math.inf for the zero polynomial."""
    if Q.k != 1:
        raise ValueError("valuation is only defined over F_p (k = 1)")
    if Q.is_zero():
        return math.inf
    c = list(Q.coeffs)
    v = 0
    while True:
        q, rem = _synthetic_divide_by_t_minus_1(c, Q.p)
        if rem:
            return v
        v += 1
        c = q


def t1_valuation_by_derivatives(Q: PolyOverZpk) -> float:
    """Least j with Q^(j)(1) / j! != 0, using Hasse derivatives sum C(n,j) c_n.

    Only a cross-check: the plain j-th derivative is j! times this and
    loses information once j >= p, so callers compare for deg Q < p only.
    """
    if Q.is_zero():
        return math.inf
    for j in range(len(Q.coeffs)):
        if j >= Q.p:
            break
        val = sum(_falling(n, j) * c for n, c in enumerate(Q.coeffs)) // factorial(j)
        if val % Q.p:
            return j
    raise ArithmeticError("derivative test inconclusive below p")


def _falling(n: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= n - i
    return out


def generating_poly(phi: PeriodicMap) -> PolyOverZpk:
    """Q(t) = sum_{n < p^N} phi(n) t^n."""
    return PolyOverZpk(phi.p, phi.k, phi.values)


# -- verifiers ---------------------------------------------------------------


def _report(check_id, params, ok, witness, counterexample=None, recheck=None):
    return Report(
        check_id=check_id,
        params=params,
        status=PASS if ok else FAIL,
        witness=witness,
        counterexample=counterexample,
        recheck=recheck,
    )


def _require_odd_prime(p):
    if p == 2 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")


def verify_lemma_val(p: int) -> Report:
    """v_(t-1)(S_r) = p-1-r for 0 <= r <= p-1."""
    _require_odd_prime(p)
    vals = [t1_valuation(power_sum_poly(r, p)) for r in range(p)]
    bad = next((r for r in range(p) if vals[r] != p - 1 - r), None)
    ce = recheck = None
    if bad is not None:
        ce = {"r": bad, "valuation": vals[bad], "expected": p - 1 - bad}

        def recheck(r=bad):
            # divide by (t-1)^(p-1-r) and look at the remainder, then once more
            S = power_sum_poly(r, p)
            e = p - 1 - r
            exact = S.divisible_by(t_minus_one(p, 1, e)) if e >= 0 else True
            more = S.divisible_by(t_minus_one(p, 1, e + 1))
            return not exact or more

    return _report("lemma-val", {"p": p}, bad is None, {"valuations": vals}, ce, recheck)


def verify_Sr_congruence(p: int) -> Report:
    """S_r = (-1)^r r! t^r (t-1)^(p-1-r)  mod (t-1)^(p-r)."""
    _require_odd_prime(p)
    bad = None
    for r in range(p):
        rhs = t_minus_one(p, 1, p - 1 - r).shift(r) * ((-1) ** r * factorial(r))
        diff = power_sum_poly(r, p) - rhs
        if t1_valuation(diff) < p - r:
            bad = r
            break
    ce = recheck = None
    if bad is not None:
        ce = {"r": bad}

        def recheck(r=bad):
            rhs = t_minus_one(p, 1, p - 1 - r).shift(r) * ((-1) ** r * factorial(r))
            return not (power_sum_poly(r, p) - rhs).divisible_by(t_minus_one(p, 1, p - r))

    return _report("sr-congruence", {"p": p}, bad is None, {"r_checked": p}, ce, recheck)


def verify_Sr_identities(p: int, r_max: int | None = None) -> Report:
    """S_r = S_(r+p-1) and S_(r+1) = t S_r' for 1 <= r <= r_max."""
    _require_odd_prime(p)
    if r_max is None:
        r_max = 2 * p
    failures = []
    for r in range(1, r_max + 1):
        S = power_sum_poly(r, p)
        if S != power_sum_poly(r + p - 1, p):
            failures.append({"r": r, "identity": "periodicity"})
        if power_sum_poly(r + 1, p) != S.derivative().shift(1):
            failures.append({"r": r, "identity": "derivative"})
    ce = failures[0] if failures else None
    recheck = None
    if ce:

        def recheck(r=ce["r"], which=ce["identity"]):
            lhs = [pow(n, r, p) for n in range(p)]
            if which == "periodicity":
                return lhs != [pow(n, r + p - 1, p) for n in range(p)]
            return [pow(n, r + 1, p) for n in range(p)] != [n * x % p for n, x in enumerate(lhs)]

    return _report("sr-identities", {"p": p, "r_max": r_max}, not failures, {"r_range": [1, r_max]}, ce, recheck)


def degree_divisibility_criteria(phi: PeriodicMap, g: int) -> dict:
    """Evaluate the polynomial criteria for deg(phi) <= g+1."""
    P = phi.period
    Q = generating_poly(phi)
    t_P_minus_1 = PolyOverZpk(phi.p, phi.k, (-1,) + (0,) * (P - 1) + (1,))
    out = {"cyclotomic_divides": (Q * t_minus_one(phi.p, phi.k, g + 2)).divisible_by(t_P_minus_1)}
    if phi.k == 1:
        need = P - g - 2
        v = t1_valuation(Q)
        out["valuation"] = v
        out["valuation_criterion"] = need <= 0 or v >= need
    return out


def verify_degree_divisibility(phi: PeriodicMap, g: int) -> Report:
    """deg(phi) <= g+1  iff  (t^P - 1) | Q(t)(t-1)^(g+2)  (and, for k = 1, iff (t-1)^(P-g-2) | Q)."""
    d = degree(phi)
    low = d <= g + 1
    crit = degree_divisibility_criteria(phi, g)
    ok = crit["cyclotomic_divides"] == low and crit.get("valuation_criterion", low) == low
    witness = {"degree": d, "degree_at_most_g_plus_1": low, **crit}
    ce = recheck = None
    if not ok:
        ce = {"map": phi, "degree": d}

        def recheck():
            # recompute the degree from iterated differences of the raw table
            v, mod, steps = list(phi.values), phi.modulus, 0
            while any(v):
                v = [(v[(i + 1) % len(v)] - v[i]) % mod for i in range(len(v))]
                steps += 1
            again = degree_divisibility_criteria(phi, g)
            low2 = max(steps - 1, 0) <= g + 1
            return again["cyclotomic_divides"] != low2 or again.get("valuation_criterion", low2) != low2

    return _report("degree-divisibility", {"p": phi.p, "k": phi.k, "N": phi.N, "g": g}, ok, witness, ce, recheck)


def degree_test_maps(p: int, k: int, N: int, g: int) -> list[tuple[str, PeriodicMap]]:
    """Maps around the degree threshold g+1: monomials, binomials C(n, j), an indicator.

    C(n, j) is p^N-periodic mod p^k only when p^N is large enough, so each
    binomial is kept only if its table really is periodic.
    """
    P, mod = p**N, p**k
    out = [(f"n^{e}", PeriodicMap.monomial(p, k, N, e)) for e in range(g + 3)]
    for j in range(g + 4):
        vals = [comb(n, j) % mod for n in range(2 * P)]
        if vals[:P] == vals[P:]:
            out.append((f"C(n,{j})", PeriodicMap(p, k, N, tuple(vals[:P]))))
    if N >= 1:
        out.append((f"[n = 0 mod {p}]", PeriodicMap.from_function(p, k, N, lambda n: int(n % p == 0))))
    return out


def verify_degree_divisibility_family(p: int, k: int, N: int, g: int) -> Report:
    """Run the degree/divisibility equivalence on every map of degree_test_maps."""
    results = {}
    first_bad = None
    for name, phi in degree_test_maps(p, k, N, g):
        r = verify_degree_divisibility(phi, g)
        results[name] = {"degree": r.witness["degree"], "equivalence_holds": r.passed}
        if not r.passed and first_bad is None:
            first_bad = r
    ok = first_bad is None
    return _report(
        "degree-divisibility",
        {"p": p, "k": k, "N": N, "g": g},
        ok,
        {"maps": results},
        None if ok else first_bad.counterexample,
        None if ok else first_bad.recheck,
    )
