"""Symplectic matrices, quadratic forms over F_2, commutators and Lagrangians."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torsionlab.reports import FAIL, PASS
from torsionlab.symplectic import (
    CHOSEN_CONVENTION,
    COMMUTATOR_CONVENTIONS,
    act_on_form,
    commutator,
    covering_degree_prime_check,
    cycle_type,
    delta_generators,
    elementary_matrix,
    enumerate_forms,
    form_parity,
    forms_fixed_by,
    in_gamma12,
    in_sigma,
    is_symplectic,
    lagrangian_enumerate,
    lagrangian_formula,
    named_odd_form,
    relation_instances,
    sign_character,
    sign_of_permutation,
    sp4_s6_action,
    standard_even_form,
    symplectic_inverse,
    verify_commutator_relations,
    verify_delta_in_commutators,
    verify_e11_fixes_named_form,
    verify_lagrangian_count,
    verify_s6_action,
)


def _admissible(g):
    n = 2 * g
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if in_sigma(i, j)]


@pytest.mark.parametrize("g", [1, 2, 3])
def test_elementary_matrices_symplectic(g):
    for i, j in _admissible(g):
        E = elementary_matrix(i, j, g)
        assert is_symplectic(E)
        assert (E @ symplectic_inverse(E) == np.eye(2 * g, dtype=np.int64)).all()


def test_inadmissible_pair_rejected():
    with pytest.raises(IndexError):
        elementary_matrix(1, 2, 2)
    with pytest.raises(IndexError):
        elementary_matrix(1, 9, 2)


@given(st.lists(st.sampled_from(_admissible(2)), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_gamma12_closed_under_products(word):
    M = np.eye(4, dtype=np.int64)
    gens = [elementary_matrix(i, j, 2) for i, j in word]
    gens = [E for E in gens if in_gamma12(E)]
    for E in gens:
        M = M @ E
    assert is_symplectic(M)
    assert in_gamma12(M)


@given(st.lists(st.sampled_from(_admissible(2)), min_size=1, max_size=5), st.sampled_from(range(16)))
@settings(max_examples=60, deadline=None)
def test_action_preserves_parity(word, idx):
    M = np.eye(4, dtype=np.int64)
    for i, j in word:
        M = M @ elementary_matrix(i, j, 2)
    q, par = enumerate_forms(2)[idx]
    assert form_parity(act_on_form(M, q)) == par


@pytest.mark.parametrize("g,even", [(1, 3), (2, 10), (3, 36), (4, 136)])
def test_parity_counts(g, even):
    pars = [par for _, par in enumerate_forms(g)]
    assert pars.count("even") == even
    assert pars.count("odd") == 4**g - even


def test_parity_against_arf_invariant():
    # Arf(q) = sum q(e_i) q(f_i); even iff 0
    for q, par in enumerate_forms(3):
        arf = sum(q.values[i] * q.values[3 + i] for i in range(3)) % 2
        assert par == ("even" if arf == 0 else "odd")


def test_forms_refine_the_pairing():
    for q, _ in enumerate_forms(2):
        assert q.polarization_ok()
    assert form_parity(standard_even_form(2)) == "even"


def test_sp4_order_by_brute_force():
    count = 0
    for code in range(1 << 16):
        M = np.array([(code >> b) & 1 for b in range(16)]).reshape(4, 4)
        count += is_symplectic(M, 2)
    assert count == 720 == sp4_s6_action().order


def test_s6_action():
    r = verify_s6_action()
    assert r.status == PASS
    act = sp4_s6_action()
    assert act.homomorphism and act.faithful and act.onto


def test_e14_and_e11_cycle_types():
    act = sp4_s6_action()
    e14 = act.permutation(elementary_matrix(1, 4, 2))
    e11 = act.permutation(elementary_matrix(1, 1, 2))
    assert cycle_type(e14) == (2, 2, 2) and sign_of_permutation(e14) == -1
    assert cycle_type(e11) == (2,)
    assert sign_character(elementary_matrix(1, 4, 2)) == -1


def test_e11_fixes_only_forms_with_value_one_on_e1():
    fixed = forms_fixed_by(elementary_matrix(1, 1, 2))
    assert len(fixed) == 4
    assert all(q.values[0] == 1 for q in fixed)


def test_e11_named_form_claim_fails_and_is_confirmed():
    r = verify_e11_fixes_named_form()
    assert r.status == FAIL
    assert r.recheck()
    # the same form is fixed by the transvection along e2
    assert act_on_form(elementary_matrix(3, 3, 2), named_odd_form()) == named_odd_form()


def test_both_commutator_conventions_satisfy_all_instances():
    for g in (2, 3):
        for conv in COMMUTATOR_CONVENTIONS:
            for _, _, a, b, target in relation_instances(g):
                assert (commutator(a, b, conv) == target).all()


@pytest.mark.parametrize("g,counts", [(2, {"1": 0, "2": 4}), (3, {"1": 24, "2": 12})])
def test_relation_instance_counts(g, counts):
    kinds = [kind for kind, *_ in relation_instances(g)]
    assert {"1": kinds.count(1), "2": kinds.count(2)} == counts


@pytest.mark.parametrize("g", [2, 3])
def test_commutator_relations(g):
    r = verify_commutator_relations(g)
    assert r.status == PASS
    assert CHOSEN_CONVENTION in COMMUTATOR_CONVENTIONS


def test_delta_generators_g3_all_witnessed():
    r = verify_delta_in_commutators(3)
    assert r.status == PASS
    assert len(r.witness["witnesses"]) == len(delta_generators(3)) == 30


def test_delta_generators_g2_missing_witnesses():
    r = verify_delta_in_commutators(2)
    assert r.status == FAIL
    assert len(r.counterexample["generators_without_witness"]) == 8
    assert r.recheck()


def _brute_lagrangians(p, r):
    """Count r-dim isotropic subspaces by collecting spans of isotropic r-tuples."""
    n = 2 * r
    J = np.zeros((n, n), dtype=np.int64)
    J[:r, r:] = np.eye(r, dtype=np.int64)
    J[r:, :r] = -np.eye(r, dtype=np.int64)
    vecs = [np.array(v) for v in itertools.product(range(p), repeat=n) if any(v)]
    spaces = set()
    for tup in itertools.combinations(range(len(vecs)), r):
        B = np.array([vecs[i] for i in tup])
        if (B @ J @ B.T % p).any():
            continue
        span = {tuple(np.array(c) @ B % p) for c in itertools.product(range(p), repeat=r)}
        if len(span) == p**r:
            spaces.add(frozenset(span))
    return len(spaces)


@pytest.mark.parametrize("p,r,count", [(2, 1, 3), (2, 2, 15), (3, 1, 4)])
def test_lagrangian_counts_brute(p, r, count):
    assert _brute_lagrangians(p, r) == count == lagrangian_enumerate(p, r)


@pytest.mark.parametrize("p,r,count", [(2, 1, 3), (2, 2, 15), (3, 1, 4), (3, 2, 40), (2, 3, 135)])
def test_lagrangian_formula_and_enumeration(p, r, count):
    assert lagrangian_formula(p, r) == count
    rep = verify_lagrangian_count(p, r)
    assert rep.status == PASS and rep.witness["count"] == count


@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 8))
@settings(max_examples=30, deadline=None)
def test_covering_degree_prime_to_p(p, r):
    assert covering_degree_prime_check(p, r).status == PASS
    assert lagrangian_formula(p, r) % p == 1
