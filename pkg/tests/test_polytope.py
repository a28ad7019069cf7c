import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gorkit import (
    EnumerationCapError,
    LatticePolytope,
    PreconditionError,
    convex_hull_union,
    dual_polytope,
    enumeration_cap,
    is_lattice_pyramid,
    minkowski_sum,
    normalized_volume,
)

from _support import cube, oracle_count, oracle_facets, oracle_hstar, pyramid, random_polytope, unit_simplex

coord = st.integers(min_value=-2, max_value=2)


def point_sets(dim):
    return st.lists(st.tuples(*[coord] * dim), min_size=dim + 1, max_size=dim + 4)


def test_square_basics():
    P = LatticePolytope([(1, 1), (-1, 1), (1, -1), (-1, -1), (0, 0)])
    assert P.vertices == ((-1, -1), (-1, 1), (1, -1), (1, 1))
    assert len(P.facets) == 4
    assert len(P.face_lattice) == 10
    assert P.face_lattice.is_eulerian()
    assert P.is_reflexive()
    assert len(P.lattice_points()) == 9
    assert len(P.lattice_points("interior")) == 1
    assert len(P.lattice_points("boundary")) == 8


def test_non_gorenstein_example_facet():
    P = LatticePolytope([(1, 1, 2), (-1, -1, -2), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)])
    assert ((2, 2, -1), 2) in set(P.facets) or ((-2, -2, 1), 2) in set(P.facets)


def test_lower_dimensional_segment():
    P = LatticePolytope([(0, 0, 0), (2, 2, 2)])
    assert P.dim == 1 and not P.is_full_dimensional
    assert P.lattice_points() == [(0, 0, 0), (1, 1, 1), (2, 2, 2)]
    assert P.lattice_points("interior") == [(1, 1, 1)]
    assert P.hstar_coefficients() == [1, 1]
    assert normalized_volume(P) == 2


def test_point_polytope():
    P = LatticePolytope([(3, -1)])
    assert P.dim == 0 and P.vertices == ((3, -1),)
    assert P.lattice_points() == [(3, -1)]
    assert P.hstar_coefficients() == [1]


def test_hstar_routes_agree_on_small_examples():
    P = unit_simplex(2, 2)
    assert P.hstar_coefficients("box") == [1, 3]
    assert P.hstar_coefficients("counts") == [1, 3]
    Q = LatticePolytope([(1, 1), (-1, 1), (1, -1), (-1, -1)])
    assert Q.hstar_coefficients() == [1, 6, 1]
    with pytest.raises(PreconditionError):
        Q.hstar_coefficients("box")
    assert Q.hstar_coefficients("counts") == [1, 6, 1]


def test_enumeration_cap():
    P = cube(3, -5, 5)
    with enumeration_cap(100):
        with pytest.raises(EnumerationCapError):
            P.lattice_points()
    assert len(P.lattice_points()) == 11**3


def test_dual_polytope_requires_interior_point():
    with pytest.raises(PreconditionError):
        dual_polytope(cube(2))
    D = dual_polytope(cube(2), (Fraction(1, 2), Fraction(1, 2)))
    assert sorted(D.vertices) == sorted(
        [(-2, 0), (0, -2), (2, 0), (0, 2)]
    )


def test_pyramid_detection():
    assert is_lattice_pyramid(unit_simplex(3)) is not None
    assert is_lattice_pyramid(pyramid(cube(2, -1, 1))) is not None
    assert is_lattice_pyramid(cube(2, -1, 1)) is None
    assert is_lattice_pyramid(unit_simplex(2, 2)) is None


def test_minkowski_and_hull():
    S = minkowski_sum(cube(2, 0, 1), cube(2, -1, 0))
    assert S == cube(2, -1, 1)
    H = convex_hull_union([unit_simplex(2), LatticePolytope([(-1, -1)])])
    assert H.n_vertices == 3


@settings(max_examples=60, deadline=None)
@given(point_sets(3))
def test_facets_match_bruteforce(pts):
    P = LatticePolytope(pts)
    if not P.is_full_dimensional:
        return
    assert sorted(P.facets) == oracle_facets(P.vertices)


@settings(max_examples=40, deadline=None)
@given(point_sets(3))
def test_lattice_point_counts_match_bruteforce(pts):
    P = LatticePolytope(pts)
    if not P.is_full_dimensional:
        return
    assert P.count_lattice_points(1) == oracle_count(P.vertices)
    assert P.count_lattice_points(2) == oracle_count(P.vertices, 2)
    assert P.count_lattice_points(1, "interior") == oracle_count(P.vertices, interior=True)


@settings(max_examples=40, deadline=None)
@given(point_sets(3))
def test_hstar_nonnegative_and_volume(pts):
    P = LatticePolytope(pts)
    if not P.is_full_dimensional:
        return
    h = P.hstar_coefficients()
    assert h[0] == 1 and all(c >= 0 for c in h)
    assert h == oracle_hstar(P.vertices)


@settings(max_examples=40, deadline=None)
@given(point_sets(3))
def test_face_lattice_eulerian(pts):
    P = LatticePolytope(pts)
    if P.dim == 0:
        return
    L = P.face_lattice
    assert L.is_eulerian()
    # f-vector satisfies Euler's relation
    f = {}
    for _, d in L.faces:
        f[d] = f.get(d, 0) + 1
    assert sum((-1) ** k * f.get(k, 0) for k in range(-1, P.dim + 1)) == 0


@settings(max_examples=30, deadline=None)
@given(point_sets(2))
def test_chart_roundtrip_lower_dim(pts):
    # embed a planar set into Z^4 via an injective integer map
    emb = [(x + y, 2 * x - y, x, -y) for x, y in pts]
    P = LatticePolytope(pts)
    Q = LatticePolytope(emb)
    assert Q.dim == P.dim
    if P.dim:
        assert Q.count_lattice_points(2) >= 1
    for v in Q.vertices:
        assert Q.chart.from_chart(Q.chart.to_chart(v)) == v


def test_random_polytopes_dual_involution():
    rng = random.Random(3)
    for _ in range(10):
        P = random_polytope(rng, 2)
        inner = P.lattice_points("interior")
        if not inner:
            continue
        m = inner[0]
        D = dual_polytope(P, m)
        # each dual vertex pairs to -1 with the vertices of its facet
        for v in D.vertices:
            assert min(sum(a * (b - c) for a, b, c in zip(v, x, m)) for x in P.vertices) == -1
