"""Special maps: predicates, kernels, cross-checks and the annihilation statements."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from torsionlab.reports import FAIL, HYPOTHESIS_NOT_MET, PASS
from torsionlab.special_maps import (
    PeriodicMap,
    cross_check_kernel,
    degree,
    difference,
    is_g_special,
    is_weakly_special,
    minimal_annihilating_exponent,
    special_kernel,
    spot_check,
    verify_lemma_ar1,
    verify_lemma_modp,
    verify_lemma_modp2,
    verify_p2_annihilation,
    verify_theorem_ar2,
    verify_weak_proposition,
)


def _all_maps(p, k, N):
    mod = p**k
    for vals in itertools.product(range(mod), repeat=p**N):
        yield PeriodicMap(p, k, N, vals)


# -- basic map algebra -------------------------------------------------------


def test_table_length_checked():
    with pytest.raises(ValueError):
        PeriodicMap(3, 1, 1, (0, 1))


def test_monomial_zero_power_is_one():
    assert PeriodicMap.monomial(5, 1, 1, 0).values == (1,) * 5


def test_degree_of_monomials():
    # n^e has difference degree e as long as e < p
    for e in range(5):
        assert degree(PeriodicMap.monomial(5, 1, 1, e)) == e
    assert degree(PeriodicMap.zero(5, 1, 1)) == 0


def test_difference_of_constant_vanishes():
    assert difference(PeriodicMap(7, 2, 1, (3,) * 7)).is_zero()


@given(st.lists(st.integers(0, 24), min_size=5, max_size=5), st.lists(st.integers(0, 24), min_size=5, max_size=5))
def test_difference_is_additive(a, b):
    f, g = PeriodicMap(5, 2, 1, a), PeriodicMap(5, 2, 1, b)
    assert difference(f + g) == difference(f) + difference(g)


# -- kernel against exhaustive enumeration -----------------------------------


@pytest.mark.parametrize("p,k,N,g", [(3, 1, 1, 1), (3, 1, 1, 2), (2, 2, 1, 1), (2, 1, 2, 1), (5, 1, 1, 2), (2, 2, 2, 1)])
def test_kernel_matches_enumeration(p, k, N, g):
    brute = {phi.values for phi in _all_maps(p, k, N) if is_g_special(phi, g)}
    K = special_kernel(p, k, N, g)
    assert K.size == len(brute)
    assert {e.values for e in K.elements} == brute


@pytest.mark.parametrize("p,k,N,g", [(3, 1, 1, 1), (2, 2, 1, 1), (5, 1, 1, 2), (3, 2, 1, 1)])
def test_weak_kernel_matches_enumeration(p, k, N, g):
    brute = {phi.values for phi in _all_maps(p, k, N) if is_weakly_special(phi, g)}
    K = special_kernel(p, k, N, g, weak=True)
    assert K.size == len(brute)


@pytest.mark.parametrize("p,k,N,g", [(5, 1, 2, 2), (5, 1, 2, 3), (3, 1, 2, 1), (5, 2, 2, 2), (7, 1, 2, 3), (3, 2, 2, 2)])
def test_three_routes_agree(p, k, N, g):
    cc = cross_check_kernel(p, k, N, g)
    assert cc.agree
    assert cc.size_by_elimination == cc.size_by_lattice
    if k == 1:
        assert cc.rref_agrees


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 24), st.integers(0, 24))
@settings(max_examples=40, deadline=None)
def test_kernel_is_closed_under_linear_combinations(i, j, a, b):
    K = special_kernel(5, 2, 2, 2)
    x, y = K.elements[i % K.size], K.elements[j % K.size]
    assert is_g_special(a * x + b * y, 2)


def test_monomial_always_in_kernel():
    for p, k, N, g in [(5, 1, 2, 2), (7, 1, 2, 3), (5, 2, 2, 4)]:
        assert special_kernel(p, k, N, g).contains_monomial()


def test_spot_check_finds_no_violations():
    K = special_kernel(5, 2, 2, 5)
    assert spot_check(K, random.Random(0), 200) == 0


# -- frozen kernel sizes (computed once by exhaustive enumeration) -----------

FROZEN_SIZES = {
    (5, 1, 2, 2): 5,
    (7, 1, 2, 2): 7,
    (7, 1, 2, 3): 7,
    (5, 2, 2, 2): 25,
    (5, 2, 2, 4): 125,
    (5, 2, 2, 5): 125,
    (5, 2, 2, 6): 125,
    (3, 1, 2, 1): 9,
}


@pytest.mark.parametrize("params,size", sorted(FROZEN_SIZES.items()))
def test_frozen_kernel_sizes(params, size):
    assert special_kernel(*params).size == size


# -- verifiers ---------------------------------------------------------------


@pytest.mark.parametrize("p,g,k", [(5, 2, 1), (7, 2, 1), (7, 3, 1), (5, 2, 2)])
def test_ar1(p, g, k):
    r = verify_lemma_ar1(p, k, 2, g)
    assert r.status == PASS
    assert r.kernel_size == p**k


def test_ar1_gate():
    r = verify_lemma_ar1(3, 1, 2, 1)
    assert r.status == HYPOTHESIS_NOT_MET
    # exploratory: over F_3 with period 9 there are more than the multiples of n
    assert r.kernel_size == 9


@pytest.mark.parametrize("p,g", [(5, 3), (5, 4), (7, 5)])
def test_modp(p, g):
    assert verify_lemma_modp(p, 2, g).status == PASS


def test_modp2():
    assert verify_lemma_modp2(5, 4).status == PASS


@pytest.mark.parametrize("g", [4, 5, 6])
def test_ar2(g):
    assert verify_theorem_ar2(5, 2, 2, g).status == PASS


@pytest.mark.parametrize("p", [5, 7])
def test_p2_annihilation(p):
    r = verify_p2_annihilation(p)
    assert r.status == PASS


@pytest.mark.parametrize("p,exponent", [(5, 2), (3, 8)])
def test_weak_proposition_uses_bound_exponent(p, exponent):
    r = verify_weak_proposition(p, 2, 2, 2)
    assert r.status == PASS
    assert r.witness["exponent"] == exponent


def test_minimal_exponent_within_claim():
    K = special_kernel(5, 2, 2, 4)
    assert minimal_annihilating_exponent(K) <= 1


def test_weak_proposition_fails_with_too_small_exponent():
    # the weak kernel at (3, 2, 2, 2) is not killed by p^0; forcing exponent 0 must fail
    r = verify_weak_proposition(3, 2, 2, 2, exponent=0)
    assert r.status == FAIL
    assert r.counterexample is not None
    assert r.recheck()
