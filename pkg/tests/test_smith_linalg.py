"""Smith form, lattice indices and modular kernels against sympy and brute force."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from torsionlab import smith
from torsionlab.linalg import kernel_mod_prime, kernel_mod_prime_power, rank_mod_prime, rref_mod_prime, same_subspace_mod_prime

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def _sympy_invariants(A):
    D = sympy_snf(Matrix(A), domain=ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)))


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_snf_reconstructs_and_matches_sympy(A):
    U, D, V = smith.smith_normal_form(A)
    assert smith.matmul(smith.matmul(U, A), V) == D
    assert abs(smith.determinant(U)) == 1
    assert abs(smith.determinant(V)) == 1
    diag = smith.diagonal(D)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert sorted(diag) == _sympy_invariants(A)


def test_determinant_against_numpy():
    rng = np.random.default_rng(3)
    for _ in range(30):
        A = rng.integers(-9, 10, size=(4, 4))
        assert smith.determinant(A.tolist()) == round(np.linalg.det(A))


def _brute_kernel(A, mod, n):
    A = np.array(A, dtype=np.int64)
    return sum(1 for x in itertools.product(range(mod), repeat=n) if not (A @ np.array(x) % mod).any())


@given(st.lists(st.lists(st.integers(0, 8), min_size=3, max_size=3), min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_kernel_orders_agree_with_enumeration(A):
    brute = _brute_kernel(A, 9, 3)
    assert kernel_mod_prime_power(A, 3, 2).order == brute
    assert smith.kernel_order_mod(A, 9, 3) == brute


@given(st.lists(st.lists(st.integers(0, 8), min_size=3, max_size=3), min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_kernel_generators_are_solutions(A):
    K = kernel_mod_prime_power(A, 3, 2)
    M = np.array(A, dtype=np.int64)
    for v in K.generators:
        assert not (M @ v % 9).any()
    assert smith.subgroup_order_mod(K.generators.tolist(), 9, 3) == K.order


def test_rref_and_rank_mod_prime():
    A = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    R, piv = rref_mod_prime(A, 5)
    assert piv == [0, 1]
    assert rank_mod_prime(A, 5) == 2
    ker = kernel_mod_prime(A, 5)
    assert ker.shape == (1, 3)
    assert not (np.array(A) @ ker[0] % 5).any()
    assert same_subspace_mod_prime(ker, 2 * ker % 5, 5, 3)
    assert not same_subspace_mod_prime(ker, np.eye(3, dtype=np.int64)[:1], 5, 3)


def test_overflow_guard():
    with pytest.raises(OverflowError):
        kernel_mod_prime_power([[1]], 2, 40)
