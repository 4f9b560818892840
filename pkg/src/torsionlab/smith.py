"""Exact integer Smith and Hermite normal forms.

Pure-Python integers throughout so that nothing can overflow.  The
matrices that reach these routines are small (relation matrices of the
Picard models, or deduplicated linear systems with a few dozen columns).
"""

from __future__ import annotations


def _as_rows(A) -> list[list[int]]:
    return [[int(x) for x in row] for row in A]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def determinant(A) -> int:
    """Bareiss fraction-free determinant."""
    M = _as_rows(A)
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]


def smith_normal_form(R):
    """Return (U, D, V) with U @ R @ V == D.

    D is m x n with non-negative diagonal d_1 | d_2 | ... and zeros
    elsewhere; U and V are unimodular.  All three are lists of lists.
    """
    A = _as_rows(R)
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        if c:
            A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        if c:
            for M in (A, V):
                for row in M:
                    row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return U, A, V
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    dirty |= A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return U, A, V


def diagonal(D) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form_mod(A, D: int, ncols: int | None = None) -> list[list[int]]:
    """Upper-triangular basis of the lattice rowspan(A) + D*Z^n, computed mod D.

    Every diagonal entry divides D, so the product of the diagonal is the
    index [Z^n : rowspan(A) + D*Z^n].
    """
    rows = _as_rows(A)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    H = [[D if i == j else 0 for j in range(n)] for i in range(n)]
    for a in rows:
        a = [x % D for x in a]
        for j in range(n):
            if a[j] == 0:
                continue
            h = H[j]
            g, s, t = _xgcd(h[j], a[j])
            u, v = h[j] // g, a[j] // g
            H[j] = [(s * x + t * y) % D for x, y in zip(h, a)]
            if H[j][j] == 0:
                H[j][j] = D
            a = [(u * y - v * x) % D for x, y in zip(h, a)]
        # a is now zero mod D
    return H


def lattice_index_mod(A, D: int, ncols: int | None = None) -> int:
    """[Z^n : rowspan(A) + D*Z^n]."""
    H = hermite_normal_form_mod(A, D, ncols)
    out = 1
    for j in range(len(H)):
        out *= H[j][j]
    return out


def kernel_order_mod(A, D: int, ncols: int | None = None) -> int:
    """Number of x in (Z/D)^n with A x = 0 mod D.

    By duality of the standard pairing on (Z/D)^n this equals the
    lattice index of rowspan(A) + D*Z^n.
    """
    return lattice_index_mod(A, D, ncols)


def subgroup_order_mod(generators, D: int, ncols: int) -> int:
    """Order of the subgroup of (Z/D)^n generated by the given vectors."""
    return D**ncols // lattice_index_mod(generators, D, ncols)
