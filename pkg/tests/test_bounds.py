"""Bound constants: exponent breakdown, n(p,g), N(g) and the corollary bound."""

from math import prod

import pytest
from hypothesis import given, strategies as st

from torsionlab.bounds import (
    big_N_of_g,
    bound_divides_faltings_chai,
    bound_gcd,
    faltings_chai_bound,
    first_squares_coprime,
    n_p_g,
    n_p_g_direct,
    optimal_corollary_bound,
    torsion_bound_exponents,
    vandermonde,
    variant_n_p_g_with_zero,
)
from torsionlab.residue_arith import primes_up_to


@pytest.mark.parametrize("g", range(1, 7))
def test_principal_polarization_gives_four(g):
    b = torsion_bound_exponents(1, g)
    assert b.total_bound == 4
    assert b.n2 == 2 and b.d_prime == 1


def test_breakdown_examples():
    assert torsion_bound_exponents(2, 1).total_bound == 32
    b = torsion_bound_exponents(3, 2)
    assert b.total_bound == 12 and b.notes
    # p = 7 = 2g - 1 at g = 4 gets exponent 2 regardless of v_7(d)
    assert torsion_bound_exponents(7**3, 4).exponents == {7: 2}
    # p = 7 strictly inside ((2g+1)/3, 2g-1) at g = 5 gets exponent 1
    assert torsion_bound_exponents(7**3, 5).exponents == {7: 1}
    # p = 3 lands on v_3(d) even inside that interval
    assert torsion_bound_exponents(27, 3).exponents == {3: 3}
    # primes = 1 mod 4 never contribute
    assert torsion_bound_exponents(5, 3).exponents == {}


def test_boundary_note_on_equality():
    # 3p = 2g+1 with p = 7 means g = 10; strict inequality sends it to v_7(d)
    b = torsion_bound_exponents(49, 10)
    assert b.exponents[7] == 2
    assert any("boundary" in n for n in b.notes)


def test_divides_grid():
    assert all(bound_divides_faltings_chai(d, g) for d in range(1, 101) for g in range(1, 11))


@given(st.integers(1, 2000), st.integers(1, 12))
def test_bound_gcd_is_the_bound(d, g):
    assert bound_gcd(d, g) == torsion_bound_exponents(d, g).total_bound
    assert faltings_chai_bound(d) == 4 * d**3


def test_inputs_validated():
    with pytest.raises(ValueError):
        torsion_bound_exponents(0, 1)
    with pytest.raises(ValueError):
        optimal_corollary_bound(2, 2, False)


def test_corollary_bound():
    assert optimal_corollary_bound(3, 2, True) == 12
    assert optimal_corollary_bound(3, 2, False) == 4


def test_first_squares_skip_multiples():
    assert first_squares_coprime(3, 4) == [1, 4, 16, 25]
    assert first_squares_coprime(2, 3) == [1, 9, 25]


def test_vandermonde_small():
    assert vandermonde([1, 4, 9]) == 3 * 8 * 5


FROZEN_NPG = {(5, 2): 2, (3, 2): 8, (2, 2): 21, (7, 1): 0}


@pytest.mark.parametrize("pg,n", sorted(FROZEN_NPG.items()))
def test_n_p_g_frozen(pg, n):
    assert n_p_g(*pg) == n


@given(st.sampled_from(primes_up_to(30)), st.integers(1, 15))
def test_n_p_g_two_routes(p, g):
    assert n_p_g(p, g) == n_p_g_direct(p, g)


def test_big_n_values():
    assert big_N_of_g(2) == 2**21 * 3**8
    assert big_N_of_g(3) == 273902605770424320000
    for g in range(1, 7):
        direct = prod(p ** n_p_g_direct(p, g) for p in primes_up_to(2 * g - 1))
        assert big_N_of_g(g) == direct
    assert big_N_of_g(6) > 2**64


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17])
def test_variant_with_zero(p):
    assert variant_n_p_g_with_zero(p) == 2
