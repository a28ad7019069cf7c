"""Exact integer linear algebra: Hermite/Smith normal forms, integer kernels,
saturated sublattices and quotient charts.

Matrices are plain tuples of tuples of Python ints (rows). Nothing in here
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(A: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    if not A:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*A))


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(rows: Sequence[Sequence]) -> int:
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve_unique(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Solve ``rows @ x = rhs`` over the rationals.

    Returns the unique solution, or ``None`` when the system is inconsistent.
    Raises ``ValueError`` when the solution is not unique.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    M = [[Fraction(a) for a in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [a * inv for a in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][n] != 0 for i in range(r, m)):
        return None
    if r < n:
        raise ValueError("linear system has no unique solution")
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = M[i][n]
    return tuple(x)


def hnf(A: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H = U @ A`` and ``U`` unimodular. ``H`` is in
    row echelon form with positive pivots, entries above each pivot reduced
    into ``[0, pivot)`` and zero rows at the bottom.
    """
    H = [list(map(int, r)) for r in A]
    m = len(H)
    n = len(H[0]) if m else 0
    U = [list(r) for r in identity(m)]

    def swap(i, j):
        H[i], H[j] = H[j], H[i]
        U[i], U[j] = U[j], U[i]

    def addmul(i, j, q):
        # row_i -= q * row_j
        if q:
            H[i] = [a - q * b for a, b in zip(H[i], H[j])]
            U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    p = 0
    for c in range(n):
        if p == m:
            break
        while True:
            nz = [i for i in range(p, m) if H[i][c] != 0]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(H[i][c]))
            if k != p:
                swap(p, k)
            done = True
            for i in range(p + 1, m):
                if H[i][c] != 0:
                    addmul(i, p, H[i][c] // H[p][c])
                    if H[i][c] != 0:
                        done = False
            if done:
                break
        if H[p][c] == 0:
            continue
        if H[p][c] < 0:
            H[p] = [-a for a in H[p]]
            U[p] = [-a for a in U[p]]
        for i in range(p):
            addmul(i, p, H[i][c] // H[p][c])
        p += 1
    return as_matrix(H), as_matrix(U)


def snf(A: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``S = U @ A @ V`` with ``d1 | d2 | ...`` and ``d_i >= 0``."""
    S = [list(map(int, r)) for r in A]
    m = len(S)
    n = len(S[0]) if m else 0
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def row_swap(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def row_addmul(i, j, q):
        S[i] = [a - q * b for a, b in zip(S[i], S[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_addmul(i, j, q):
        for row in S:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            row_swap(t, i)
            col_swap(t, j)
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    row_addmul(i, t, S[i][t] // S[t][t])
                    clean &= S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    col_addmul(j, t, S[t][j] // S[t][t])
                    clean &= S[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % S[t][t]),
                None,
            )
            if bad is None:
                break
            # pull the offending row up so the next pass reduces the pivot
            row_addmul(t, bad, -1)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
    return as_matrix(S), as_matrix(U), as_matrix(V)


def kernel_basis(A: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Lattice basis (rows, in HNF) of ``{x in Z^ncols : A x = 0}``."""
    if not A:
        return identity(ncols)
    H, U = hnf(transpose(A))
    rows = [U[i] for i in range(len(H)) if not any(H[i])]
    if not rows:
        return ()
    return tuple(r for r in hnf(rows)[0] if any(r))


def saturation(vectors: Sequence[Sequence[int]], d: int) -> IntMatrix:
    """Basis (rows, in HNF) of ``span(vectors) ∩ Z^d``."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return ()
    return kernel_basis(kernel_basis(vectors, d), d)


def lattice_basis(vectors: Sequence[Sequence[int]]) -> IntMatrix:
    """Basis of the lattice generated by ``vectors`` (not saturated)."""
    H, _ = hnf(vectors)
    return tuple(r for r in H if any(r))


def complete_to_unimodular(n_vec: Sequence[int]) -> IntMatrix:
    """Unimodular matrix whose last row is the primitive vector ``n_vec``.

    The other rows come from the HNF of ``n_vec`` as a column, so the result
    is deterministic.
    """
    d = len(n_vec)
    H, U = hnf([[x] for x in n_vec])
    if H[0][0] != 1:
        raise ValueError(f"vector {tuple(n_vec)} is not primitive")
    # U n = e_1, so n is the first column of U^{-1}; rows of (U^{-1})^T give
    # coordinates whose first entry is the pairing with n.
    Uinv = inverse_unimodular(U)
    phi = transpose(Uinv)
    return tuple(phi[1:]) + (phi[0],)


def inverse_unimodular(U: Sequence[Sequence[int]]) -> IntMatrix:
    n = len(U)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        piv = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [a * inv for a in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    out = []
    for row in M:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(v) for v in vals))
    return tuple(out)


@dataclass(frozen=True)
class QuotientMap:
    """Surjection ``Z^d -> Z^(d - rank)`` whose kernel is a saturated sublattice."""

    kernel: IntMatrix
    matrix: IntMatrix
    ambient_dim: int

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __call__(self, v: Sequence[int]) -> Vector:
        return matvec(self.matrix, v)


def quotient_projection(kernel: Sequence[Sequence[int]], d: int) -> QuotientMap:
    """Project ``Z^d`` along the saturation of ``span(kernel)``.

    The rows of the returned matrix are an HNF basis of the integer vectors
    orthogonal to the kernel, so the map is onto ``Z^(d - rank)``.
    """
    K = saturation(kernel, d)
    C = kernel_basis(K, d) if K else identity(d)
    return QuotientMap(kernel=K, matrix=C, ambient_dim=d)


def primitive(v: Sequence[int]) -> Vector:
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)
