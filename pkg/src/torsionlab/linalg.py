"""Kernels of linear systems over Z/p^k.

Two independent routes:

* ``kernel_mod_prime_power`` diagonalizes over the local ring Z/p^k
  (pivot on an entry of minimal p-adic valuation, which then divides
  everything left in the active block).  Works for every k.
* ``kernel_mod_prime`` is plain reduced row echelon form over F_p.

For k = 1 both must describe the same subspace; for every k the kernel
order is also available from the integer HNF in :mod:`torsionlab.smith`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ModularKernel:
    """Generating set and order of {x in (Z/p^k)^n : A x = 0}."""

    p: int
    k: int
    generators: np.ndarray  # one generator per row
    order: int
    pivot_valuations: list[int]

    @property
    def modulus(self) -> int:
        return self.p**self.k


def _valuation_array(M: np.ndarray, p: int, k: int) -> np.ndarray:
    v = np.full(M.shape, k, dtype=np.int64)
    mask = M != 0
    q = p
    for e in range(k):
        hit = mask & (M % q != 0) & (v == k)
        v[hit] = e
        q *= p
    return v


def kernel_mod_prime_power(A, p: int, k: int) -> ModularKernel:
    mod = p**k
    # products of two residues must fit in int64
    if mod * mod >= 2**62:
        raise OverflowError("modulus too large for int64 elimination")
    M = np.array(A, dtype=np.int64) % mod
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, n = M.shape
    V = np.eye(n, dtype=np.int64)
    vals: list[int] = []
    t = 0
    while t < min(m, n):
        sub = M[t:, t:]
        if not sub.any():
            break
        v = _valuation_array(sub, p, k)
        i, j = np.unravel_index(np.argmin(v), v.shape)
        e = int(v[i, j])
        i += t
        j += t
        if i != t:
            M[[t, i]] = M[[i, t]]
        if j != t:
            M[:, [t, j]] = M[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        pe = p**e
        unit = int(M[t, t]) // pe
        M[t] = (M[t] * pow(unit, -1, mod)) % mod
        # clear column t below the pivot
        factors = M[t + 1 :, t] // pe
        M[t + 1 :] = (M[t + 1 :] - np.outer(factors, M[t])) % mod
        # clear row t right of the pivot (column ops are recorded in V)
        factors = M[t, t + 1 :] // pe
        M[:, t + 1 :] = (M[:, t + 1 :] - np.outer(M[:, t], factors)) % mod
        V[:, t + 1 :] = (V[:, t + 1 :] - np.outer(V[:, t], factors)) % mod
        vals.append(e)
        t += 1
    gens = []
    order = 1
    for idx, e in enumerate(vals):
        if e > 0:
            gens.append(V[:, idx] * p ** (k - e) % mod)
            order *= p**e
    for idx in range(len(vals), n):
        gens.append(V[:, idx] % mod)
        order *= mod
    G = np.array(gens, dtype=np.int64).reshape(len(gens), n)
    return ModularKernel(p, k, G, order, vals)


def rref_mod_prime(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p and the pivot columns."""
    M = np.array(A, dtype=np.int64) % p
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, n = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        col = M[:, c].copy()
        col[r] = 0
        M = (M - np.outer(col, M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def kernel_mod_prime(A, p: int) -> np.ndarray:
    """Basis (rows) of the null space over F_p from free columns of the RREF."""
    A = np.asarray(A)
    n = A.shape[1]
    R, pivots = rref_mod_prime(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        x = np.zeros(n, dtype=np.int64)
        x[f] = 1
        for row, c in zip(R, pivots):
            x[c] = (-row[f]) % p
        basis.append(x)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


def same_subspace_mod_prime(B1, B2, p: int, n: int) -> bool:
    """Compare spans over F_p through their canonical RREF."""
    def canon(B):
        B = np.asarray(B, dtype=np.int64).reshape(-1, n)
        if B.shape[0] == 0:
            return np.zeros((0, n), dtype=np.int64)
        return rref_mod_prime(B, p)[0]

    R1, R2 = canon(B1), canon(B2)
    return R1.shape == R2.shape and bool((R1 == R2).all())


def rank_mod_prime(A, p: int) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    return len(rref_mod_prime(A, p)[1])
