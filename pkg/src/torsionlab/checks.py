"""Registry of named checks and the report envelope used by the CLI.

Each check is a function of keyword parameters returning a Report.  The
registry records the parameter schema so that the command line and suite
files can be validated before anything runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import bounds, picard, polynomials, special_maps, symplectic
from .reports import FAIL, PASS, SKIPPED, Report, jsonable
from .residue_arith import (
    is_prime,
    legendre_symbol,
    solve_binary_form_neg1,
    solve_four_squares_neg1,
    solve_two_squares_neg1,
)

SCHEMA_VERSION = 1
ENGINE_VERSION = "0.1.0"

REQUIRED = object()


class UsageError(ValueError):
    """Bad check id or parameters; maps to exit code 2."""


@dataclass
class CheckDescriptor:
    check_id: str
    func: Callable[..., Report]
    params: dict[str, tuple[type, Any]]  # name -> (type, default or REQUIRED)
    module: str
    summary: str

    def bind(self, given: dict[str, Any]) -> dict[str, Any]:
        unknown = sorted(set(given) - set(self.params))
        if unknown:
            raise UsageError(f"{self.check_id}: unknown parameter(s) {', '.join(unknown)}")
        out = {}
        for name, (typ, default) in self.params.items():
            if name in given and given[name] is not None:
                val = given[name]
                try:
                    if typ is bool:
                        if not isinstance(val, bool):
                            raise TypeError
                        out[name] = val
                    else:
                        if isinstance(val, bool) or (isinstance(val, float) and not val.is_integer()):
                            raise TypeError
                        out[name] = typ(val)
                except (TypeError, ValueError):
                    raise UsageError(f"{self.check_id}: parameter {name} must be {typ.__name__}") from None
            elif default is REQUIRED:
                raise UsageError(f"{self.check_id}: missing required parameter {name}")
            else:
                out[name] = default
        return out


REGISTRY: dict[str, CheckDescriptor] = {}


def register(check_id: str, module: str, summary: str, **params):
    def deco(func):
        if check_id in REGISTRY:
            raise RuntimeError(f"duplicate check id {check_id}")
        REGISTRY[check_id] = CheckDescriptor(check_id, func, params, module, summary)
        return func

    return deco


def _prime(p: int, odd: bool = False):
    if not is_prime(p) or (odd and p == 2):
        raise UsageError(f"p={p} must be {'an odd ' if odd else 'a '}prime")


def _simple(check_id, params, ok, witness, ce=None, recheck=None, notes=None):
    return Report(check_id, params, PASS if ok else FAIL, witness, ce if not ok else None, notes or [], recheck)


# -- residue_arith -----------------------------------------------------------


@register("two-squares", "residue_arith", "n^2 + m^2 = -1 mod p^N", p=(int, REQUIRED), N=(int, 1))
def _two_squares(p, N):
    _prime(p, odd=True)
    n, m = solve_two_squares_neg1(p, N)
    mod = p**N
    ok = (n * n + m * m + 1) % mod == 0
    return _simple("two-squares", dict(p=p, N=N), ok, {"n": n, "m": m}, {"n": n, "m": m},
                   lambda: pow(n, 2, mod) + pow(m, 2, mod) + 1 != mod and (n * n + m * m + 1) % mod != 0)


@register("binary-form", "residue_arith", "a^2 + l b^2 = -1 mod N", l=(int, REQUIRED), N=(int, REQUIRED))
def _binary_form(l, N):
    if l < 1 or N < 1:
        raise UsageError("l and N must be positive")
    sol = solve_binary_form_neg1(l, N)
    if sol is None:
        return Report("binary-form", dict(l=l, N=N), SKIPPED, {"solution": None}, None, ["no solution modulo N"])
    a, b = sol
    ok = (a * a + l * b * b + 1) % N == 0
    return _simple("binary-form", dict(l=l, N=N), ok, {"a": a, "b": b}, {"a": a, "b": b},
                   lambda: (a * a + l * b * b + 1) % N != 0)


@register("four-squares", "residue_arith", "sum of four squares = -1 mod N", N=(int, REQUIRED))
def _four_squares(N):
    if N < 2:
        raise UsageError("N must be >= 2")
    t = solve_four_squares_neg1(N)
    ok = (sum(x * x for x in t) + 1) % N == 0
    return _simple("four-squares", dict(N=N), ok, {"solution": list(t)}, {"solution": list(t)},
                   lambda: (sum(x * x for x in t) + 1) % N != 0)


@register("legendre", "residue_arith", "Legendre symbol against Euler's criterion for all n mod p", p=(int, REQUIRED))
def _legendre(p):
    _prime(p, odd=True)
    bad = [n for n in range(p) if legendre_symbol(n, p) % p != pow(n, (p - 1) // 2, p)]
    return _simple("legendre", dict(p=p), not bad, {"checked": p}, {"n": bad[:1]},
                   lambda: bool(bad) and legendre_symbol(bad[0], p) % p != pow(bad[0], (p - 1) // 2, p))


# -- special_maps ------------------------------------------------------------


@register("ar1", "special_maps", "g-special maps are n -> n^g phi(1)",
          p=(int, REQUIRED), k=(int, 1), N=(int, 2), g=(int, REQUIRED), seed=(int, 0))
def _ar1(p, k, N, g, seed):
    _prime(p)
    return special_maps.verify_lemma_ar1(p, k, N, g, seed=seed)


@register("modp", "special_maps", "mod p kernel inside span{n^g, n^(g-(p-1)/2)}",
          p=(int, REQUIRED), N=(int, 2), g=(int, REQUIRED), seed=(int, 0))
def _modp(p, N, g, seed):
    _prime(p)
    return special_maps.verify_lemma_modp(p, N, g, seed=seed)


@register("modp2", "special_maps", "p (phi(n) - n^g phi(1)) = 0 over Z/p^2, period p^2",
          p=(int, REQUIRED), g=(int, REQUIRED), N=(int, 2), seed=(int, 0))
def _modp2(p, g, N, seed):
    _prime(p)
    return special_maps.verify_lemma_modp2(p, g, N, seed=seed)


@register("ar2", "special_maps", "p (phi(n) - n^g phi(1)) = 0",
          p=(int, REQUIRED), k=(int, 2), N=(int, 2), g=(int, REQUIRED), seed=(int, 0))
def _ar2(p, k, N, g, seed):
    _prime(p)
    return special_maps.verify_theorem_ar2(p, k, N, g, seed=seed)


@register("p2-annihilation", "special_maps", "p^2 annihilates phi(n) - n^g phi(1) for g = (p+1)/2",
          p=(int, REQUIRED), k=(int, 3), N=(int, None), seed=(int, 0))
def _p2(p, k, N, seed):
    _prime(p, odd=True)
    return special_maps.verify_p2_annihilation(p, k, N, seed=seed)


@register("weak-prop", "special_maps", "p^n(p,g) annihilates f(n) - n^g f(1) on weakly special maps",
          p=(int, REQUIRED), k=(int, REQUIRED), N=(int, REQUIRED), g=(int, REQUIRED), seed=(int, 0))
def _weak(p, k, N, g, seed):
    _prime(p)
    return special_maps.verify_weak_proposition(p, k, N, g, seed=seed)


@register("kernel-crosscheck", "special_maps", "local elimination vs HNF order (and F_p RREF when k = 1)",
          p=(int, REQUIRED), k=(int, 1), N=(int, 2), g=(int, REQUIRED))
def _crosscheck(p, k, N, g):
    _prime(p)
    cc = special_maps.cross_check_kernel(p, k, N, g)
    w = {"size_by_elimination": cc.size_by_elimination, "size_by_lattice": cc.size_by_lattice,
         "rref_agrees": cc.rref_agrees}
    return _simple("kernel-crosscheck", dict(p=p, k=k, N=N, g=g), cc.agree, w, dict(w),
                   lambda: not special_maps.cross_check_kernel(p, k, N, g).agree)


# -- poly_valuations ---------------------------------------------------------


@register("lemma-val", "poly_valuations", "v_(t-1)(S_r) = p-1-r", p=(int, REQUIRED))
def _lemma_val(p):
    _prime(p, odd=True)
    return polynomials.verify_lemma_val(p)


@register("sr-congruence", "poly_valuations", "S_r = (-1)^r r! t^r (t-1)^(p-1-r) mod (t-1)^(p-r)", p=(int, REQUIRED))
def _sr_cong(p):
    _prime(p, odd=True)
    return polynomials.verify_Sr_congruence(p)


@register("sr-identities", "poly_valuations", "S_r = S_(r+p-1) and S_(r+1) = t S_r'",
          p=(int, REQUIRED), r=(int, None))
def _sr_id(p, r):
    _prime(p, odd=True)
    return polynomials.verify_Sr_identities(p, r)


@register("degree-divisibility", "poly_valuations", "deg <= g+1 iff the polynomial divisibility criteria hold",
          p=(int, REQUIRED), k=(int, 1), N=(int, 1), g=(int, REQUIRED))
def _degdiv(p, k, N, g):
    _prime(p)
    return polynomials.verify_degree_divisibility_family(p, k, N, g)


# -- bound_engine ------------------------------------------------------------


@register("torsion-bound", "bound_engine", "2^n2 d' and its divisibility of 4 d^3", d=(int, REQUIRED), g=(int, REQUIRED))
def _torsion_bound(d, g):
    if d < 1 or g < 1:
        raise UsageError("d and g must be positive")
    b = bounds.torsion_bound_exponents(d, g)
    fc = bounds.faltings_chai_bound(d)
    ok = fc % b.total_bound == 0
    return _simple("torsion-bound", dict(d=d, g=g), ok, {"breakdown": b, "faltings_chai": fc},
                   {"total_bound": b.total_bound, "faltings_chai": fc}, lambda: (4 * d**3) % b.total_bound != 0,
                   b.notes)


@register("bound-grid", "bound_engine", "2^n2 d' divides 4 d^3 for all d <= d_max, g <= g_max",
          d=(int, 100), g=(int, 10))
def _bound_grid(d, g):
    bad = [(dd, gg) for dd in range(1, d + 1) for gg in range(1, g + 1) if not bounds.bound_divides_faltings_chai(dd, gg)]
    principal = [bounds.torsion_bound_exponents(1, gg).total_bound for gg in range(1, min(g, 6) + 1)]
    ok = not bad and all(x == 4 for x in principal)
    return _simple("bound-grid", dict(d=d, g=g), ok, {"pairs_checked": d * g, "d1_bounds": principal},
                   {"first_failure": bad[:1], "d1_bounds": principal},
                   lambda: bool(bad) and (4 * bad[0][0] ** 3) % bounds.torsion_bound_exponents(*bad[0]).total_bound != 0)


@register("faltings-chai", "bound_engine", "the baseline 4 d^3", d=(int, REQUIRED))
def _fc(d):
    if d < 1:
        raise UsageError("d must be positive")
    return _simple("faltings-chai", dict(d=d), True, {"bound": bounds.faltings_chai_bound(d)})


@register("n-p-g", "bound_engine", "n(p,g) by factorwise valuation vs big-integer product",
          p=(int, REQUIRED), g=(int, REQUIRED))
def _npg(p, g):
    _prime(p)
    a, b = bounds.n_p_g(p, g), bounds.n_p_g_direct(p, g)
    return _simple("n-p-g", dict(p=p, g=g), a == b,
                   {"n_p_g": a, "nodes": bounds.first_squares_coprime(p, g + 2)}, {"factorwise": a, "direct": b},
                   lambda: bounds.n_p_g(p, g) != bounds.n_p_g_direct(p, g))


@register("variant-zero", "bound_engine", "v_p(Vandermonde with node 0) = 2 for g = (p+1)/2", p=(int, REQUIRED))
def _variant(p):
    if p <= 3 or not is_prime(p):
        raise UsageError("p must be a prime > 3")
    v = bounds.variant_n_p_g_with_zero(p)
    return _simple("variant-zero", dict(p=p), v == 2, {"valuation": v}, {"valuation": v},
                   lambda: bounds.variant_n_p_g_with_zero(p) != 2)


@register("big-n", "bound_engine", "N(g) against a direct big-integer recomputation", g=(int, REQUIRED))
def _bign(g):
    if g < 1:
        raise UsageError("g must be >= 1")
    from .residue_arith import primes_up_to

    val = bounds.big_N_of_g(g)
    direct = 1
    for p in primes_up_to(2 * g - 1):
        direct *= p ** bounds.n_p_g_direct(p, g)
    return _simple("big-n", dict(g=g), val == direct, {"N": val}, {"N": val, "direct": direct},
                   lambda: bounds.big_N_of_g(g) != direct)


@register("corollary-bound", "bound_engine", "4, or 12 for 3-type (1,...,1,3^k)",
          d=(int, REQUIRED), g=(int, REQUIRED), three_type=(bool, False))
def _corollary(d, g, three_type):
    try:
        b = bounds.optimal_corollary_bound(d, g, three_type)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return _simple("corollary-bound", dict(d=d, g=g, three_type=three_type), True, {"bound": b})


# -- symplectic --------------------------------------------------------------


@register("forms", "symplectic", "parity counts of quadratic refinements", g=(int, REQUIRED))
def _forms(g):
    if not 1 <= g <= 4:
        raise UsageError("g must be in 1..4")
    pars = [par for _, par in symplectic.enumerate_forms(g)]
    even, odd = pars.count(symplectic.EVEN), pars.count(symplectic.ODD)
    want = 2 ** (g - 1) * (2**g + 1)
    ok = even == want and odd == 4**g - want and symplectic.form_parity(symplectic.standard_even_form(g)) == "even"
    return _simple("forms", dict(g=g), ok, {"even": even, "odd": odd}, {"even": even, "expected_even": want},
                   lambda: even != want)


@register("s6-action", "symplectic", "Sp_4(F_2) acting on the six odd forms", dump_table=(bool, False))
def _s6(dump_table):
    r = symplectic.verify_s6_action()
    if dump_table:
        r.witness["table"] = symplectic.sp4_s6_action().to_json()
    return r


@register("e11-named-form", "symplectic", "E11 fixes x1y1 + x2y2 + x2^2 + y2^2")
def _e11():
    return symplectic.verify_e11_fixes_named_form()


@register("commutators", "symplectic", "commutator relations on elementary matrices", g=(int, REQUIRED))
def _comm(g):
    if g not in (2, 3):
        raise UsageError("g must be 2 or 3")
    return symplectic.verify_commutator_relations(g)


@register("delta-commutators", "symplectic", "every Delta generator is a commutator in Gamma_{1,2}", g=(int, REQUIRED))
def _delta(g):
    if g not in (2, 3):
        raise UsageError("g must be 2 or 3")
    return symplectic.verify_delta_in_commutators(g)


@register("lagrangian-count", "symplectic", "Lagrangian subspaces of F_p^(2r) vs prod (p^i + 1)",
          p=(int, REQUIRED), r=(int, REQUIRED))
def _lag(p, r):
    _prime(p)
    if r < 1 or p ** (2 * r) > symplectic.LAGRANGIAN_LIMIT:
        raise UsageError(f"need r >= 1 and p^(2r) <= {symplectic.LAGRANGIAN_LIMIT}")
    return symplectic.verify_lagrangian_count(p, r)


@register("covering-degree", "symplectic", "prod (p^i + 1) is prime to p", p=(int, REQUIRED), r=(int, REQUIRED))
def _cov(p, r):
    _prime(p)
    return symplectic.covering_degree_prime_check(p, r)


# -- picard_calc -------------------------------------------------------------


@register("elliptic-orders", "picard_calc", "Delta(L_3(e)) = -omega and Delta(L_1(e)) has order 4 in Z/12")
def _elliptic():
    d3 = picard.elliptic_delta(3, "e") % picard.PIC_A1
    o1 = picard.cyclic_order(picard.elliptic_delta(1, "e"), picard.PIC_A1)
    ok = d3 == picard.PIC_A1 - 1 and o1 == 4
    return _simple("elliptic-orders", {}, ok, {"delta_L3": d3, "order_delta_L1": o1},
                   {"delta_L3": d3, "order_delta_L1": o1}, _recheck_elliptic_orders)


def _recheck_elliptic_orders() -> bool:
    # Delta(L_d(e)) = 2 det + d with det = d(d-1)/2 + 1; order found by stepping multiples
    delta = lambda d: (2 * (d * (d - 1) // 2 + 1) + d) % 12  # noqa: E731
    order = next(n for n in range(1, 13) if n * delta(1) % 12 == 0)
    return delta(3) != 11 or order != 4


@register("relations-elliptic", "picard_calc", "Delta(L^n) relations in the Z/12 model", B=(int, 25))
def _rel(B):
    return picard.verify_relations_elliptic(B)


@register("elliptic-bound", "picard_calc", "elliptic orders divide the general bound", d=(int, 12))
def _elliptic_bound(d):
    return picard.verify_elliptic_bound_consistency(d)


@register("m2bar-chain", "picard_calc", "theta-divisor identity chain and genus-2 moduli groups",
          dump_relations=(bool, False))
def _m2(dump_relations):
    return picard.verify_m2bar_chain(dump_relations=dump_relations)


@register("interpolation", "picard_calc", "det pi_* L^n by difference extension vs closed forms",
          g=(int, REQUIRED), B=(int, 20))
def _interp(g, B):
    if g not in (2, 3):
        raise UsageError("g must be 2 or 3")
    return picard.verify_interpolation(g, B)


@register("annihilator", "picard_calc", "q-exponent of Delta(L) forced by the relation model",
          g=(int, REQUIRED), q=(int, REQUIRED), B=(int, 18), dump_relations=(bool, False))
def _ann(g, q, B, dump_relations):
    if g not in (2, 3) or q not in (2, 3) or B < 9:
        raise UsageError("need g in {2,3}, q in {2,3}, B >= 9")
    return picard.verify_annihilator(g, q, B, dump_relations=dump_relations)


# -- running -----------------------------------------------------------------


def _lookup(witness: dict, path: str):
    cur: Any = jsonable(witness)
    for part in path.split("."):
        if isinstance(cur, dict) and part in cur:
            cur = cur[part]
        else:
            raise KeyError(path)
    return cur


@dataclass
class VerificationReport:
    check_id: str
    params: dict
    status: str
    witness: dict
    counterexample: dict | None
    notes: list[str]
    elapsed_ms: float | None = None
    counterexample_confirmed: bool | None = None
    expectation: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def as_expected(self) -> bool:
        if self.expectation is None:
            return self.status != FAIL
        return self.expectation["met"]

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "engine_version": ENGINE_VERSION,
            "check_id": self.check_id,
            "params": jsonable(self.params),
            "status": self.status,
            "witness": jsonable(self.witness),
            "counterexample": jsonable(self.counterexample),
            "counterexample_confirmed": self.counterexample_confirmed,
            "notes": list(self.notes),
            "elapsed_ms": self.elapsed_ms,
        }
        if self.expectation is not None:
            d["expectation"] = jsonable(self.expectation)
        d.update(self.extra)
        return d


def run_check(check_id: str, params: dict | None = None, *, timing: bool = False,
              expect: dict | None = None, expect_status: str | None = None, note: str | None = None) -> VerificationReport:
    """Run one registered check and wrap the outcome.

    A fail is only emitted after its recheck closure confirms the
    counterexample; unconfirmed failures are flagged in the report.
    """
    if check_id not in REGISTRY:
        raise UsageError(f"unknown check id {check_id!r}")
    desc = REGISTRY[check_id]
    bound = desc.bind(params or {})
    t0 = time.perf_counter()
    rep = desc.func(**bound)
    elapsed = round((time.perf_counter() - t0) * 1000, 3) if timing else None

    status, witness, ce, recheck = rep.status, dict(rep.witness), rep.counterexample, rep.recheck
    notes = list(rep.notes)
    if hasattr(rep, "kernel_size"):
        witness.setdefault("kernel_size", rep.kernel_size)

    expectation = None
    mismatches = []
    if expect:
        for path, want in sorted(expect.items()):
            try:
                got = _lookup(witness, path)
            except KeyError:
                got = "<missing>"
            if got != want:
                mismatches.append({"field": path, "expected": want, "actual": got})
        if mismatches and status != FAIL:
            status = FAIL
            ce = {"expectation_mismatch": mismatches}
            recheck = lambda: any(m["actual"] != m["expected"] for m in mismatches)  # noqa: E731
    confirmed = None
    if status == FAIL:
        if ce is None:
            ce = {"detail": "verifier reported failure without a counterexample"}
        confirmed = bool(recheck()) if recheck is not None else False
        if not confirmed:
            notes.append("counterexample could not be independently confirmed")
    if expect or expect_status:
        met = not mismatches and (status == expect_status if expect_status else status != FAIL)
        expectation = {"fields": expect or {}, "status": expect_status, "met": met}
    if note:
        notes.append(note)
    return VerificationReport(check_id, bound, status, witness, ce, notes, elapsed, confirmed, expectation)


def _run_entry(entry: dict) -> dict:
    rep = run_check(entry["check"], entry.get("params"), timing=entry.get("timing", False),
                    expect=entry.get("expect"), expect_status=entry.get("expect_status"), note=entry.get("note"))
    return {"report": rep.to_dict(), "as_expected": rep.as_expected}
