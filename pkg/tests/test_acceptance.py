"""Acceptance gate: one printed PASS/FAIL line per criterion.

The lines are repeated in the pytest terminal summary.  Each test
asserts its criterion, so a failing criterion also fails the test.
"""

import json
import subprocess
import sys
import time
from importlib import resources

import pytest

from torsionlab import bounds, picard, polynomials, special_maps, symplectic
from torsionlab.reports import PASS

def gate(log, title, checks, limit_s=None, started=None):
    elapsed = time.perf_counter() - started if started is not None else None
    failed = [name for name, ok in checks.items() if not ok]
    if limit_s is not None and elapsed is not None and elapsed >= limit_s:
        failed.append(f"runtime {elapsed:.2f}s >= {limit_s}s")
    status = "PASS" if not failed else "FAIL"
    tail = f" ({elapsed:.2f}s)" if elapsed is not None else ""
    line = f"ACCEPTANCE {status}: {title}{tail}"
    if failed:
        line += " | failed: " + ", ".join(failed)
    print("\n" + line)
    log.append(line)
    assert not failed, line


def test_power_sum_valuations(acceptance_log):
    t0 = time.perf_counter()
    checks = {}
    for p in (3, 5, 7, 11, 13):
        checks[f"val p={p}"] = polynomials.verify_lemma_val(p).status == PASS
        checks[f"congruence p={p}"] = polynomials.verify_Sr_congruence(p).status == PASS
        checks[f"identities p={p}"] = polynomials.verify_Sr_identities(p).status == PASS
    gate(acceptance_log, "v_(t-1)(S_r) = p-1-r, congruence and identities", checks, 1.0, t0)


def test_special_kernel_is_monomial(acceptance_log):
    t0 = time.perf_counter()
    checks = {}
    for p, g, k, N in [(5, 2, 1, 2), (7, 2, 1, 2), (7, 3, 1, 2), (5, 2, 2, 2)]:
        r = special_maps.verify_lemma_ar1(p, k, N, g)
        checks[f"(p,g,k,N)=({p},{g},{k},{N})"] = r.status == PASS and r.kernel_size == p**k
    gate(acceptance_log, "g-special kernel is exactly lambda n^g", checks, 10.0, t0)


def test_mod_p_span(acceptance_log):
    checks = {f"(p,g)=({p},{g})": special_maps.verify_lemma_modp(p, 2, g).status == PASS for p, g in [(5, 3), (5, 4), (7, 5)]}
    gate(acceptance_log, "mod p kernel inside span{n^g, n^(g-(p-1)/2)}", checks)


def test_p_times_difference_vanishes(acceptance_log):
    checks = {f"g={g}": special_maps.verify_theorem_ar2(5, 2, 2, g).status == PASS for g in (4, 5, 6)}
    gate(acceptance_log, "p (phi(n) - n^g phi(1)) = 0 at p=5, k=2, N=2", checks)


def test_p_squared_annihilation(acceptance_log):
    checks = {}
    for p in (5, 7):
        checks[f"annihilation p={p}"] = special_maps.verify_p2_annihilation(p).status == PASS
        checks[f"variant valuation p={p}"] = bounds.variant_n_p_g_with_zero(p) == 2
    gate(acceptance_log, "p^2 annihilates at g=(p+1)/2 and zero-node valuation is 2", checks)


def test_weak_proposition(acceptance_log):
    checks = {}
    for p, k, N, g in [(5, 2, 2, 2), (3, 2, 2, 2)]:
        r = special_maps.verify_weak_proposition(p, k, N, g)
        checks[f"({p},{k},{N},{g})"] = r.status == PASS and r.witness["exponent"] == bounds.n_p_g(p, g)
    gate(acceptance_log, "p^n(p,g) annihilates weakly special maps", checks)


def test_bound_engine(acceptance_log):
    checks = {f"d=1 g={g}": bounds.torsion_bound_exponents(1, g).total_bound == 4 for g in range(1, 7)}
    checks["three-type bound 12"] = bounds.optimal_corollary_bound(3, 2, True) == 12
    checks["divides 4d^3 grid"] = all(bounds.bound_divides_faltings_chai(d, g) for d in range(1, 101) for g in range(1, 11))
    direct = 1
    for p in (2, 3):
        direct *= p ** bounds.n_p_g_direct(p, 2)
    checks["N(2) direct"] = bounds.big_N_of_g(2) == direct
    gate(acceptance_log, "bound engine values", checks)


def test_symplectic(acceptance_log):
    t0 = time.perf_counter()
    act = symplectic.sp4_s6_action()
    forms = [par for _, par in symplectic.enumerate_forms(2)]
    e14 = act.permutation(symplectic.elementary_matrix(1, 4, 2))
    E11 = symplectic.elementary_matrix(1, 1, 2)
    e11 = act.permutation(E11)
    q = symplectic.named_odd_form()
    checks = {
        "order 720": act.order == 720,
        "6 odd 10 even": (forms.count("odd"), forms.count("even")) == (6, 10),
        "faithful homomorphism": act.homomorphism and act.faithful,
        "E14 three transpositions, sign -1": symplectic.cycle_type(e14) == (2, 2, 2) and symplectic.sign_of_permutation(e14) == -1,
        "E11 transposition": symplectic.cycle_type(e11) == (2,),
        "E11 fixes x1y1+x2y2+x2^2+y2^2": symplectic.act_on_form(E11, q) == q,
    }
    gate(acceptance_log, "Sp_4(F_2) and its action on odd forms", checks, 30.0, t0)


def test_commutators(acceptance_log):
    checks = {f"relations g={g}": symplectic.verify_commutator_relations(g).status == PASS for g in (2, 3)}
    checks["Delta generators g=3"] = symplectic.verify_delta_in_commutators(3).status == PASS
    gate(acceptance_log, "commutator relations and Delta in the commutator subgroup", checks)


def test_lagrangians(acceptance_log):
    checks = {}
    for p, r in [(2, 1), (2, 2), (3, 1), (3, 2)]:
        rep = symplectic.verify_lagrangian_count(p, r)
        checks[f"(p,r)=({p},{r})"] = rep.status == PASS and rep.witness["gcd_with_p"] == 1
    gate(acceptance_log, "Lagrangian counts equal prod (p^i + 1), prime to p", checks)


def test_picard_models(acceptance_log):
    rep = picard.verify_m2bar_chain()
    c = rep.witness["checks"]
    checks = {
        "M2bar free rank 2": c["M2bar_free_rank_2"],
        "M2 = Z/10": c["M2_cyclic_10"],
        "order(5 lambda - delta1) = 2": c["order_5lambda_minus_delta1_is_2"],
        "identity chain": c["chain_membership"],
    }
    gate(acceptance_log, "Smith normal form of the genus-2 Picard models", checks)


def test_elliptic(acceptance_log):
    checks = {
        "Delta(L_3(e)) = -omega": picard.elliptic_delta(3) % picard.PIC_A1 == picard.PIC_A1 - 1,
        "order Delta(L_1(e)) = 4": picard.cyclic_order(picard.elliptic_delta(1), picard.PIC_A1) == 4,
        "relations n <= 25": picard.verify_relations_elliptic(25).status == PASS,
    }
    gate(acceptance_log, "elliptic Z/12 model", checks)


def test_interpolation_and_annihilator(acceptance_log):
    checks = {f"interpolation g={g}": picard.verify_interpolation(g, 20).status == PASS for g in (2, 3)}
    e2 = picard.annihilator_bound(2, 2, 18)
    e3 = picard.annihilator_bound(2, 3, 12)
    checks["2-exponent divides 8"] = e2 is not None and e2 <= 3
    checks["3-exponent divides 9"] = e3 is not None and e3 <= 2
    gate(acceptance_log, "interpolation and 8 * 9 annihilation at g=2", checks)


def test_negative_control(acceptance_log, tmp_path):
    cfg = tmp_path / "corrupt.json"
    cfg.write_text(json.dumps({"checks": [{"check": "lagrangian-count", "params": {"p": 2, "r": 2}, "expect": {"count": 16}}]}))
    res = subprocess.run([sys.executable, "-m", "torsionlab.cli", "suite", "--config", str(cfg)], capture_output=True)
    gate(acceptance_log, "corrupted expectation gives exit 1", {"exit code 1": res.returncode == 1})


def test_default_suite_runtime(acceptance_log):
    t0 = time.perf_counter()
    res = subprocess.run([sys.executable, "-m", "torsionlab.cli", "suite"], capture_output=True, text=True)
    default = json.loads(resources.files("torsionlab").joinpath("data/default_suite.json").read_text())
    gate(acceptance_log, "default suite exits 0 in under 2 minutes",
         {"exit code 0": res.returncode == 0, "non-empty": bool(default["checks"])}, 120.0, t0)
