from hypothesis import given, settings, strategies as st

from gorkit.lattice import (
    complete_to_unimodular,
    determinant,
    hnf,
    inverse_unimodular,
    kernel_basis,
    matmul,
    matvec,
    primitive,
    quotient_projection,
    rank,
    saturation,
    snf,
    solve_unique,
)

from _support import _det, determinantal_divisors, oracle_rank

small = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def test_hnf_square_example():
    H, U = hnf([[2, 4], [1, 3]])
    assert matmul(U, [[2, 4], [1, 3]]) == H
    assert H == ((1, 1), (0, 2))


def test_snf_example():
    S, U, V = snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [S[i][i] for i in range(3)] == [2, 6, 12]


@settings(max_examples=120, deadline=None)
@given(matrices())
def test_hnf_properties(A):
    H, U = hnf(A)
    assert matmul(U, A) == H
    assert abs(determinant(U)) == 1
    # row echelon with positive pivots and reduced entries above them
    last = -1
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            assert all(not any(r) for r in H[i:])
            break
        p = nz[0]
        assert p > last and row[p] > 0
        for k in range(i):
            assert 0 <= H[k][p] < row[p]
        last = p
    assert rank(A) == oracle_rank(A)


@settings(max_examples=80, deadline=None)
@given(matrices(3, 3))
def test_snf_matches_determinantal_divisors(A):
    S, U, V = snf(A)
    assert matmul(matmul(U, A), V) == S
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [S[i][i] for i in range(min(len(A), len(A[0])))]
    for i in range(len(S)):
        for j in range(len(S[0])):
            if i != j:
                assert S[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        assert b == 0 or (a != 0 and b % a == 0)
    dk = determinantal_divisors(A)
    prev = 1
    for k, g in enumerate(dk):
        if g == 0:
            assert all(x == 0 for x in diag[k:])
            break
        assert diag[k] == g // prev
        prev = g


@settings(max_examples=80, deadline=None)
@given(matrices(3, 4))
def test_kernel_is_saturated(A):
    n = len(A[0])
    K = kernel_basis(A, n)
    assert len(K) == n - oracle_rank(A)
    for k in K:
        assert all(x == 0 for x in matvec(A, k))
    if K:
        # saturated: gcd of maximal minors is 1
        assert determinantal_divisors(K)[-1] == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3))
def test_saturation_contains_vectors(vs):
    B = saturation(vs, 4)
    assert len(B) == oracle_rank(vs)
    for v in vs:
        assert oracle_rank(list(B) + [v]) == len(B)


@settings(max_examples=80, deadline=None)
@given(st.lists(small, min_size=1, max_size=5).filter(any))
def test_complete_to_unimodular(v):
    n = primitive(v)
    M = complete_to_unimodular(n)
    assert tuple(M[-1]) == tuple(n)
    assert abs(_det(M)) == 1
    Minv = inverse_unimodular(M)
    assert matmul(M, Minv) == tuple(tuple(int(i == j) for j in range(len(n))) for i in range(len(n)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=2))
def test_quotient_projection_onto_and_kills_kernel(vs):
    q = quotient_projection(vs, 4)
    for v in vs:
        assert not any(q(v))
    assert q.rank == 4 - oracle_rank(vs)
    if q.rank:
        S, _, _ = snf(q.matrix)
        assert all(S[i][i] == 1 for i in range(q.rank))


def test_solve_unique():
    assert solve_unique([[1, 1], [1, -1]], [2, 0]) == (1, 1)
    assert solve_unique([[1, 1], [2, 2]], [1, 3]) is None
