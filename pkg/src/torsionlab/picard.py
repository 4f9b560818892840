"""Finitely presented abelian groups and the concrete Picard-group models.

A group is Z^n modulo the row span of an integer relation matrix R.  With
the Smith decomposition U R V = D the substitution y = x V turns the group
into the direct sum of Z / d_i, which gives invariants, orders and
membership at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, gcd

from . import smith
from .bounds import torsion_bound_exponents
from .reports import FAIL, PASS, SKIPPED, Report

INFINITE = "infinite"


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass
class FPAbelianGroup:
    generator_names: list[str]
    relations: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.generator_names)
        self.relations = [[int(x) for x in row] for row in self.relations]
        for row in self.relations:
            if len(row) != n:
                raise ValueError("relation length does not match generator count")

    @property
    def ngens(self) -> int:
        return len(self.generator_names)

    @cached_property
    def snf(self):
        """(U, D, V, diag) with U R V = D checked exactly."""
        n = self.ngens
        if not self.relations:
            return smith.identity(0), [], smith.identity(n), [0] * n
        U, D, V = smith.smith_normal_form(self.relations)
        if smith.matmul(smith.matmul(U, self.relations), V) != D:
            raise ArithmeticError("Smith decomposition does not reconstruct")
        if abs(smith.determinant(U)) != 1 or abs(smith.determinant(V)) != 1:
            raise ArithmeticError("Smith transforms are not unimodular")
        diag = smith.diagonal(D) + [0] * (n - min(len(D), n))
        for a, b in zip(diag, diag[1:]):
            if b and (a == 0 or b % a):
                raise ArithmeticError("Smith diagonal fails the divisibility chain")
        return U, D, V, diag

    @property
    def invariants(self) -> list[int]:
        """Torsion invariants d_i > 1."""
        return [d for d in self.snf[3] if d > 1]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.snf[3] if d == 0)

    def element(self, **coeffs) -> list[int]:
        unknown = set(coeffs) - set(self.generator_names)
        if unknown:
            raise KeyError(f"unknown generators {sorted(unknown)}")
        return [coeffs.get(s, 0) for s in self.generator_names]

    def _coordinates(self, x) -> list[int]:
        if len(x) != self.ngens:
            raise ValueError("element length does not match generator count")
        V = self.snf[2]
        return [sum(x[i] * V[i][j] for i in range(self.ngens)) for j in range(self.ngens)]

    def element_order(self, x):
        """Least n > 0 with n x in the relation lattice, or INFINITE."""
        order = 1
        for y, d in zip(self._coordinates(x), self.snf[3]):
            if d == 0:
                if y:
                    return INFINITE
            else:
                order = _lcm(order, d // gcd(d, y))
        return order

    def contains(self, x) -> bool:
        """Whether x lies in the relation lattice (is zero in the group)."""
        return all((y == 0) if d == 0 else (y % d == 0) for y, d in zip(self._coordinates(x), self.snf[3]))

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariants] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {
            "generators": self.generator_names,
            "relations": self.relations,
            "invariants": self.invariants,
            "rank": self.rank,
        }


def cyclic_order(x: int, n: int) -> int:
    """Order of x in Z/n."""
    return n // gcd(x % n, n)


# -- the elliptic model ------------------------------------------------------
# Pic of the moduli of elliptic curves is modelled as Z/12 omega; the stack
# with a marked 2-torsion point as Z/4 omega.

PIC_A1 = 12
PIC_A1_TILDE = 4
VARIANTS = ("e", "eta")


def elliptic_det(d: int, variant: str = "e") -> int:
    """Coefficient of omega in det pi_* L_d."""
    if variant == "e":
        return d * (d - 1) // 2 + 1
    if variant == "eta":
        return d * (d - 1) // 2
    raise ValueError(f"variant must be one of {VARIANTS}")


def elliptic_delta(d: int, variant: str = "e") -> int:
    """Coefficient of omega in Delta(L_d) = 2 det + d omega."""
    out = d * d + 2 if variant == "e" else d * d
    if out != 2 * elliptic_det(d, variant) + d:
        raise ArithmeticError("Delta does not match 2 det + d omega")
    return out


# -- interpolation of det pi_* L^n -------------------------------------------
# Values are coefficient vectors over (det L, det L^2, d omega).

Vec = tuple[Fraction, Fraction, Fraction]


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vscale(c, a):
    return tuple(c * x for x in a)


def serre_dual_extension(values: dict[int, Vec], g: int) -> dict[int, Vec]:
    """Values at -n from values at n: f(-n) = (-1)^(g+1) (f(n) + n^g d omega)."""
    sign = (-1) ** (g + 1)
    out = {}
    for n, v in values.items():
        out[-n] = _vscale(sign, _vadd(v, (0, 0, n**g)))
    return out


def _base_values(g: int) -> dict[int, Vec]:
    vals = {0: (0, 0, 0), 1: (1, 0, 0), 2: (0, 1, 0)}  # det pi_* O_A = 0 for g >= 2
    vals.update(serre_dual_extension({1: vals[1], 2: vals[2]}, g))
    return {n: tuple(Fraction(x) for x in v) for n, v in vals.items()}


def _difference_weights(order: int) -> list[int]:
    # delta^order f(n) = sum_j (-1)^(order-j) C(order, j) f(n+j)
    return [(-1) ** (order - j) * comb(order, j) for j in range(order + 1)]


@dataclass
class InterpolationTable:
    g: int
    values: dict[int, Vec]
    window_consistent: bool


def _extend(g: int, lo: int, hi: int) -> InterpolationTable:
    """Extend from n in [-2, 2] to [lo, hi] using delta^(g+2) f = 0."""
    if g < 2:
        raise ValueError("interpolation uses det pi_* O_A = 0, which needs g >= 2")
    vals = _base_values(g)
    order = g + 2
    w = _difference_weights(order)
    # forward: f(n+order) = -sum_{j<order} w_j f(n+j)
    consistent = True
    for start in range(-2, 3 - order):
        # windows fully inside the seed data must already vanish
        tot = (0, 0, 0)
        for j in range(order + 1):
            tot = _vadd(tot, _vscale(w[j], vals[start + j]))
        consistent &= all(x == 0 for x in tot)
    n = 3
    while n <= hi:
        tot = (0, 0, 0)
        for j in range(order):
            tot = _vadd(tot, _vscale(-w[j], vals[n - order + j]))
        vals[n] = tot
        n += 1
    n = -3
    while n >= lo:
        # f(n) = -(sum_{j>=1} w_j f(n+j)) / w_0 with w_0 = (-1)^order
        tot = (0, 0, 0)
        for j in range(1, order + 1):
            tot = _vadd(tot, _vscale(-w[j], vals[n + j]))
        vals[n] = _vscale(Fraction(1, w[0]), tot)
        n -= 1
    return InterpolationTable(g, vals, consistent)


def interpolate_detLn(g: int, n: int) -> tuple[int, int, int]:
    """Coefficients (c1, c2, c3) with det pi_*L^n = c1 det L + c2 det L^2 + c3 d omega."""
    if g not in (2, 3):
        raise ValueError("g must be 2 or 3")
    table = _extend(g, min(n, -2), max(n, 2))
    if not table.window_consistent:
        raise ArithmeticError("seed values are inconsistent with the degree bound")
    v = table.values[n]
    if any(x.denominator != 1 for x in v):
        raise ArithmeticError(f"non-integer coefficient at n={n}: {v}")
    return tuple(int(x) for x in v)


def printed_detLn(g: int, n: int) -> tuple[Fraction, Fraction, Fraction]:
    """The closed forms for comparison (exact rationals)."""
    if g == 2:
        return (Fraction(4 * n - n**3, 3), Fraction(n**3 - n, 6), Fraction(n * (n - 1) * (n - 2), 6))
    if g == 3:
        return (
            Fraction(4 * n**2 - n**4, 3),
            Fraction(n**4 - n**2, 12),
            Fraction(n**2 * (n - 1) * (n - 2), 6),
        )
    raise ValueError("g must be 2 or 3")


def delta_coefficients(g: int, n: int) -> tuple[int, int]:
    """(c1, c2) with Delta(L^n) = c1 Delta(L) + c2 Delta(L^2)."""
    c1, c2, c3 = interpolate_detLn(g, n)
    # Delta(L^n) = 2 det L^n + n^g d omega; the omega parts must agree
    if 2 * c3 + n**g != c1 + 2**g * c2:
        raise ArithmeticError(f"omega coefficients disagree at n={n}")
    return c1, c2


# -- relation model for Delta(L^n) -------------------------------------------

ISOGENY_MULTIPLIER = {2: 9, 3: 4}  # m with m = square, prime to q


@dataclass
class DeltaSymbolModel:
    g: int
    B: int
    q: int
    group: FPAbelianGroup
    tags: list[str]

    def symbol(self, n: int) -> list[int]:
        x = [0] * self.group.ngens
        x[n + self.B] = 1
        return x


def delta_symbol_model(g: int, q: int, B: int) -> DeltaSymbolModel:
    """Symbols x_n (|n| <= B) standing for the q-primary part of Delta(L^n).

    Relations: interpolation x_n = c1(n) x_1 + c2(n) x_2, duality
    x_{-n} = -(-1)^g x_n, x_0 = 0, and the isogeny axiom x_{mn} = m^g x_n
    with m = 9 for q = 2 and m = 4 for q = 3.
    """
    if q not in ISOGENY_MULTIPLIER:
        raise ValueError("q must be 2 or 3")
    if B < 2:
        raise ValueError("B must be >= 2")
    names = [f"x{n}" for n in range(-B, B + 1)]
    rows, tags = [], []

    def rel(coeffs: dict[int, int], tag: str):
        v = [0] * len(names)
        for n, c in coeffs.items():
            v[n + B] += c
        if any(v):
            rows.append(v)
            tags.append(tag)

    rel({0: 1}, "zero")
    for n in range(-B, B + 1):
        if n not in (1, 2):
            c1, c2 = delta_coefficients(g, n)
            rel({n: 1, 1: -c1, 2: -c2}, "interpolation")
    for n in range(1, B + 1):
        rel({-n: 1, n: (-1) ** g}, "duality")
    m = ISOGENY_MULTIPLIER[q]
    for n in range(-B, B + 1):
        if n and abs(m * n) <= B:
            rel({m * n: 1, n: -(m**g)}, f"isogeny-{q}")
    return DeltaSymbolModel(g, B, q, FPAbelianGroup(names, rows), tags)


def annihilator_bound(g: int, q: int, B: int) -> int | None:
    """v_q of the order of x_1 in the model, or None when x_1 has infinite order."""
    if B < 9:
        raise ValueError("B must be >= 9")
    model = delta_symbol_model(g, q, B)
    order = model.group.element_order(model.symbol(1))
    if order == INFINITE:
        return None
    e = 0
    while order % q == 0:
        order //= q
        e += 1
    return e


# -- verifiers ---------------------------------------------------------------


def _legendre_sign(n: int, p: int) -> int:
    """(n/p) by Euler's criterion, kept separate from residue_arith on purpose."""
    r = pow(n, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def verify_relations_elliptic(B: int = 25) -> Report:
    """The Delta(L^n) relations evaluated in the Z/12 model (g = 1)."""
    g = 1

    def delta(n, d=1):  # Delta(L_d(e)^n) = Delta(L_{nd}(e))
        return elliptic_delta(n * d, "e") % PIC_A1

    def part(x, q):  # Z/12 = Z/4 x Z/3
        return x % (4 if q == 2 else 3)

    failures = []
    counts = {"relation_2": 0, "relation_4": 0, "corollary_2_primary": 0, "corollary_full": 0, "proposition": 0}
    for n in range(1, B + 1):
        for p in (3, 7, 11):
            if n % p:
                counts["relation_2"] += 1
                # only the 3-part is non-trivial in Z/12
                lhs = delta(n) % 3 if p == 3 else 0
                rhs = (_legendre_sign(n, p) * n**g * delta(1)) % 3 if p == 3 else 0
                if lhs != rhs:
                    failures.append({"relation": "2", "n": n, "p": p})
        if n % 2:
            counts["relation_4"] += 1
            ratio = (n + 8) * pow(n, -1, 4)
            if part(delta(n + 8), 2) != part(ratio**g * delta(n), 2):
                failures.append({"relation": "4", "n": n})
            counts["corollary_2_primary"] += 1
            if part(delta(n), 2) != part(n ** (g - 1) * delta(1), 2):
                failures.append({"relation": "corollary", "n": n})
        if gcd(n, 6) == 1:
            counts["corollary_full"] += 1
            if delta(n) != (n ** (g - 1) * delta(1)) % PIC_A1:
                failures.append({"relation": "corollary-full", "n": n})
    for d in range(1, B + 1):
        counts["proposition"] += 1
        if part(d * (delta(3, d) + 3**g * delta(1, d)), 2):
            failures.append({"relation": "proposition", "d": d})
    ok = not failures
    notes = ["full corollary is checked for gcd(n, 6) = 1, where the 3-part also agrees"]
    ce = failures[0] if failures else None
    recheck = None
    if ce:

        def recheck(f=ce):
            # recompute the offending instance straight from n^2 + 2 mod 12
            D = lambda m: (m * m + 2) % 12
            if f["relation"] == "2":
                n = f["n"]
                return D(n) % 3 != (_legendre_sign(n, 3) * n * D(1)) % 3
            if f["relation"] == "4":
                n = f["n"]
                return D(n + 8) % 4 != ((n + 8) * pow(n, -1, 4) * D(n)) % 4
            if f["relation"] == "corollary":
                return D(f["n"]) % 4 != D(1) % 4
            if f["relation"] == "corollary-full":
                return D(f["n"]) != D(1)
            d = f["d"]
            return (d * (D(3 * d) + 3 * D(d))) % 4 != 0

    return Report("relations-elliptic", {"B": B}, PASS if ok else FAIL, {"counts": counts}, ce, notes, recheck)


def m2bar_chain_group() -> FPAbelianGroup:
    """The intermediate identities of the theta-divisor computation as relations.

    a = det O_Theta, b = det omega_Theta, u = det O_Theta(Theta),
    t0 = det O_A, t1 = det O_A(Theta), c = det omega_Theta^2,
    e = det O_Theta(2 Theta), h = det O_A(2 Theta), D2 = det L^2,
    Dp2 = Delta'(L^2), w = omega-bar, delta = singular-theta divisor.
    """
    names = ["a", "b", "u", "t0", "t1", "c", "e", "h", "D2", "Dp2", "w", "delta"]
    G = FPAbelianGroup(names)

    def r(**k):
        return G.element(**k)

    rows = [
        r(a=1, b=-1),  # Serre duality on Theta
        r(b=1, u=-1, w=-1),  # adjunction
        r(u=1, t1=-1, t0=1),  # 0 -> O_A -> O_A(Theta) -> O_Theta(Theta) -> 0
        r(t1=1),  # trivial
        r(t0=1),  # trivial
        r(c=1, e=-1, w=-6),  # square of adjunction
        r(h=1, D2=-1, w=-4),  # L^2 = O(2 Theta) x pullback
        r(e=1, h=-1, t1=1),  # 0 -> O_A(Theta) -> O_A(2 Theta) -> O_Theta(2 Theta) -> 0
        r(Dp2=1, D2=-1, w=-2),  # definition of Delta'
        r(c=1, b=-13, delta=1),  # stable curve formula
    ]
    return FPAbelianGroup(names, rows)


def moduli_genus2_groups() -> dict[str, FPAbelianGroup]:
    return {
        "M2bar": FPAbelianGroup(["lambda", "delta0", "delta1"], [[10, -1, -2]]),
        "M2": FPAbelianGroup(["lambda"], [[10]]),
        "M2prime": FPAbelianGroup(["lambda", "delta1"], [[10, -2]]),
    }


def verify_m2bar_chain(dump_relations: bool = False) -> Report:
    G = m2bar_chain_group()
    targets = {
        "a = w": G.element(a=1, w=-1),
        "5w = delta + Delta'(L^2)": G.element(w=5, delta=-1, Dp2=-1),
    }
    membership = {k: G.contains(v) for k, v in targets.items()}
    groups = moduli_genus2_groups()
    Mp = groups["M2prime"]
    order = Mp.element_order(Mp.element(**{"lambda": 5, "delta1": -1}))
    structure = {k: {"invariants": v.invariants, "rank": v.rank} for k, v in groups.items()}
    checks = {
        "chain_membership": all(membership.values()),
        "M2bar_free_rank_2": groups["M2bar"].invariants == [] and groups["M2bar"].rank == 2,
        "M2_cyclic_10": groups["M2"].invariants == [10] and groups["M2"].rank == 0,
        "order_5lambda_minus_delta1_is_2": order == 2,
    }
    witness = {"membership": membership, "structure": structure, "order_5lambda_minus_delta1": order, "checks": checks}
    if dump_relations:
        witness["relations"] = {"chain": G.to_json(), **{k: v.to_json() for k, v in groups.items()}}
    ok = all(checks.values())
    ce = recheck = None
    if not ok:
        ce = {"failed": [k for k, v in checks.items() if not v]}

        def recheck():
            # the chain is small enough to re-solve by substitution
            w = 1
            a = b = w  # u = t1 - t0 = 0
            D2 = 0
            c = D2 + 10 * w
            delta = 13 * b - c
            Dp2 = D2 + 2 * w
            return not (a == w and 5 * w == delta + Dp2) or order != 2

    return Report("m2bar-chain", {}, PASS if ok else FAIL, witness, ce, [], recheck)


def verify_elliptic_bound_consistency(d_max: int = 12) -> Report:
    rows, bad = [], []
    for d in range(1, d_max + 1):
        bound = torsion_bound_exponents(d, 1).total_bound
        oe = cyclic_order(elliptic_delta(d, "e"), PIC_A1)
        oh = cyclic_order(elliptic_delta(d, "eta"), PIC_A1_TILDE)
        rows.append({"d": d, "bound": bound, "order_e": oe, "order_eta": oh})
        if bound % oe or bound % oh:
            bad.append(d)
    ok = not bad
    ce = {"d": bad} if bad else None
    recheck = None
    if bad:

        def recheck(d=bad[0]):
            b = torsion_bound_exponents(d, 1).total_bound
            return (b * (d * d + 2)) % 12 != 0 or (b * d * d) % 4 != 0

    return Report("elliptic-bound", {"d_max": d_max}, PASS if ok else FAIL, {"table": rows}, ce, [], recheck)


def verify_interpolation(g: int, n_max: int = 20) -> Report:
    """interpolate_detLn against the closed forms for |n| <= n_max."""
    mismatches = []
    for n in range(-n_max, n_max + 1):
        got = interpolate_detLn(g, n)
        want = printed_detLn(g, n)
        if any(Fraction(a) != b for a, b in zip(got, want)) or any(b.denominator != 1 for b in want):
            mismatches.append({"n": n, "interpolated": list(got), "closed_form": [str(b) for b in want]})
        delta_coefficients(g, n)
    ok = not mismatches
    ce = mismatches[0] if mismatches else None
    recheck = None
    if ce:

        def recheck(n=ce["n"]):
            # fit the degree-(g+1) polynomial through the seed values by Lagrange interpolation
            seed = _base_values(g)
            xs = sorted(seed)[: g + 2]
            val = [Fraction(0)] * 3
            for xi in xs:
                w = Fraction(1)
                for xj in xs:
                    if xj != xi:
                        w *= Fraction(n - xj, xi - xj)
                val = [a + w * b for a, b in zip(val, seed[xi])]
            return tuple(val) != printed_detLn(g, n)

    # g = 1, d = 1: det L = elliptic_det(1) omega and d omega = omega
    v = serre_dual_extension({1: (1, 0, 0)}, 1)[-1]
    elliptic_minus1 = v[0] * elliptic_det(1, "e") + v[2]
    witness = {
        "n_range": [-n_max, n_max],
        "sample_n3": list(interpolate_detLn(g, 3)),
        "elliptic_det_at_minus_1": elliptic_minus1,
        "elliptic_formula_at_minus_1": elliptic_det(-1, "e"),
    }
    if elliptic_minus1 != elliptic_det(-1, "e"):
        ok = False
        ce = ce or {"elliptic_check": witness}
        # by hand: f(-1) = (-1)^(g+1) (f(1) + 1^g d omega) with g = 1, d = 1
        recheck = recheck or (lambda: elliptic_det(1, "e") + 1 != ((-1) * (-2)) // 2 + 1)
    return Report("interpolation", {"g": g, "n_max": n_max}, PASS if ok else FAIL, witness, ce, [], recheck)


def verify_annihilator(g: int, q: int, B: int, dump_relations: bool = False) -> Report:
    """Exponent of q in the order of Delta(L) forced by the relation model.

    The status compares against the bound 8 * 9, i.e. exponent <= 3 for
    q = 2 and <= 2 for q = 3.  When the model forces no torsion at this B
    the check is skipped rather than failed.
    """
    model = delta_symbol_model(g, q, B)
    e = annihilator_bound(g, q, B)
    limit = {2: 3, 3: 2}[q]
    ok = e is not None and e <= limit
    witness = {"exponent": e, "bound_exponent": limit, "group": model.group.describe()}
    if dump_relations:
        witness["relations"] = model.group.to_json()
        witness["relation_tags"] = model.tags
    notes = [] if e is not None else ["no torsion forced at this B"]
    ce = recheck = None
    if e is None:
        return Report("annihilator", {"g": g, "q": q, "B": B}, SKIPPED, witness, None, notes)
    if not ok:
        ce = {"exponent": e, "bound_exponent": limit}

        def recheck():
            # recompute from the reduced two-generator lattice
            lat = _reduced_lattice(g, q, B)
            if not lat:
                return True
            o = _order_e1(lat)
            if o is None:
                return True
            v = 0
            while o % q == 0:
                o //= q
                v += 1
            return v > limit

    return Report("annihilator", {"g": g, "q": q, "B": B}, PASS if ok else FAIL, witness, ce, notes, recheck)


def _reduced_lattice(g, q, B):
    """Isogeny relations rewritten on (x_1, x_2) through the interpolation."""
    m = ISOGENY_MULTIPLIER[q]
    rows = []
    for n in range(-B, B + 1):
        if n and abs(m * n) <= B:
            a, b = delta_coefficients(g, m * n), delta_coefficients(g, n)
            rows.append([a[0] - m**g * b[0], a[1] - m**g * b[1]])
    return rows


def _order_e1(rows):
    G = FPAbelianGroup(["x1", "x2"], rows)
    o = G.element_order([1, 0])
    return None if o == INFINITE else o
