import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gorkit import (
    LatticePolytope,
    PreconditionError,
    cone_over,
    dual_gorenstein,
    dual_polytope,
    gorenstein_data,
    is_gorenstein,
    refined_lattice_check,
)

from _support import cube, random_polytope, unit_simplex

NON_GORENSTEIN = LatticePolytope([(1, 1, 2), (-1, -1, -2), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)])


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_unit_cube_index_two(d):
    g = gorenstein_data(cube(d))
    assert g.index == 2
    assert g.interior_point == (Fraction(1, 2),) * d
    assert g.m == (1,) * d


def test_simplex_and_non_gorenstein():
    assert gorenstein_data(unit_simplex(3)).index == 4
    assert gorenstein_data(NON_GORENSTEIN) is None
    assert not is_gorenstein(NON_GORENSTEIN)
    assert gorenstein_data(LatticePolytope([(0, 0)])) is None


@pytest.mark.parametrize("r", [1, 2, 3])
def test_dilated_odd_simplex_index(r):
    assert gorenstein_data(unit_simplex(2 * r - 1, 2)).index == r


def test_lower_dimensional_gorenstein():
    # a unit square sitting in a plane of Z^3
    P = LatticePolytope([(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 2)])
    g = gorenstein_data(P)
    assert g.index == 2
    assert g.m == (1, 1, 2)


def _hibi_symmetric(h):
    s = len(h) - 1
    return all(h[i] == h[s - i] for i in range(s + 1))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=4, max_size=7))
def test_gorenstein_iff_hstar_symmetric(pts):
    P = LatticePolytope(pts)
    if not P.is_full_dimensional:
        return
    h = P.hstar_coefficients()
    g = gorenstein_data(P)
    assert (g is not None) == _hibi_symmetric(h)
    if g is not None:
        assert g.index == P.dim + 1 - (len(h) - 1)


def test_boundary_counts_of_the_simplex_example():
    D = unit_simplex(3)
    pair = dual_gorenstein(D)
    # 4 times the dual Gorenstein simplex
    assert len(pair.P_dual.dilate(4).lattice_points("boundary")) == 34
    # polar of the reflexive simplex 4D - m
    polar = dual_polytope(gorenstein_data(D).reflexive).to_lattice()
    assert len(polar.lattice_points("boundary")) == 4
    # twice the dual of 2D
    pair2 = dual_gorenstein(D.dilate(2))
    assert pair2.index == 2
    assert len(pair2.P_dual.lattice_points()) == 4
    assert sum(pair2.P_dual.hstar_coefficients()) == 2
    assert len(pair2.P_dual.dilate(2).lattice_points("boundary")) == 10


def test_cone_duality_involution():
    for P in [cube(3), unit_simplex(3), unit_simplex(3, 2), cube(2, -1, 1)]:
        sigma = cone_over(P)
        dual = sigma.dual()
        assert dual.index == sigma.index == gorenstein_data(P).index
        back = dual.dual()
        assert back.rays == sigma.rays
        assert back.n_sigma == sigma.n_sigma
        # rays of the dual are the facet normals, pairing to 1 with m_dual
        for w in dual.rays:
            assert sum(a * b for a, b in zip(w, sigma.m_dual)) == 1


def test_dual_pair_is_involutive_up_to_isomorphism():
    for P in [cube(3), unit_simplex(3, 2), cube(2, -1, 1)]:
        pair = dual_gorenstein(P)
        back = dual_gorenstein(pair.P_dual)
        Q = back.P_dual
        assert Q.hstar_coefficients() == P.hstar_coefficients()
        assert len(Q.lattice_points()) == len(P.lattice_points())
        assert back.index == pair.index


def test_face_duality_reverses_order():
    P = cube(3)
    pair = dual_gorenstein(P)
    L = P.face_lattice
    for mask, d in L.faces:
        if mask == 0:
            continue
        dm = pair.dual_face(mask)
        dd = pair.P_dual.face_lattice.dim(dm) if dm else -1
        assert d + dd == P.dim - 1
        assert pair.dual_face_inverse(dm) == mask


def test_non_gorenstein_dual_raises():
    with pytest.raises(PreconditionError):
        dual_gorenstein(NON_GORENSTEIN)


@pytest.mark.parametrize("P", [unit_simplex(3), unit_simplex(3, 2), cube(2), cube(3), unit_simplex(2)])
def test_refined_lattice_boundary_identity(P):
    rep = refined_lattice_check(P)
    assert rep.equal
    assert rep.lattice_index == rep.index


def test_random_gorenstein_duals_consistent():
    rng = random.Random(11)
    seen = 0
    while seen < 8:
        P = random_polytope(rng, 2, box=2, npts=4)
        g = gorenstein_data(P)
        if g is None:
            continue
        seen += 1
        pair = dual_gorenstein(P)
        assert pair.index == g.index
        assert len(pair.P_dual.vertices) == len(P.facets)
        assert len(pair.P_dual.facets) == P.n_vertices
