import pytest
from hypothesis import given, settings, strategies as st

from gorkit import LatticePolytope, PreconditionError, cayley_polytope, convex_hull_union, dual_polytope, hstar
from gorkit.nef import (
    NefPartition,
    cancel_check,
    center_and_properize,
    centered,
    collect,
    cones_meet_trivially,
    decompose_irreducible,
    detect_nef,
    dual_nef,
    lattice_point_count_identity,
    nef_vertex_formula,
    project_nef,
)

from _support import SEGMENT_PAIR, CANCEL_P, CANCEL_Q, cube, cube_pair, embed, reflexive_polygons

AXES = (LatticePolytope([(-1, 0), (1, 0)]), LatticePolytope([(0, -1), (0, 1)]))
POLYGONS = reflexive_polygons()


def direct_product(a: NefPartition, b: NefPartition) -> NefPartition:
    da, db = a.ambient_dim, b.ambient_dim
    parts = [embed(P, 0, db) for P in a.parts] + [embed(P, da, 0) for P in b.parts]
    return centered(parts)


def _e(d, i, s=1):
    return tuple(s * int(i == j) for j in range(d))


# ---------------------------------------------------------------- detection


@pytest.mark.parametrize("d", [1, 2, 3])
def test_cube_pair_detected_centered_proper(d):
    np_ = detect_nef(cube_pair(d))
    assert np_ is not None
    assert np_.centered and np_.proper and np_.r == 2


def test_segment_pair_parts_are_not_nef():
    assert detect_nef(SEGMENT_PAIR) is None


def test_single_reflexive_part():
    P = cube(2, 0, 2)
    np_ = detect_nef([P])
    assert np_.points == ((1, 1),)


def test_lexicographic_witness():
    # translated cube pair: witnesses are forced to +q and -q
    q = (2, -1)
    parts = [cube(2, 0, 1).translate(q), cube(2, -1, 0).translate((-2, 1))]
    np_ = detect_nef(parts)
    assert np_.points[0] in parts[0].lattice_points()
    assert np_.points == min(
        (p, tuple(-x for x in p))
        for p in parts[0].lattice_points()
        if parts[1].contains(tuple(-x for x in p))
    )


def test_detect_requires_full_dimensional_sum():
    with pytest.raises(PreconditionError):
        detect_nef([LatticePolytope([(0, 0), (1, 0)])])


def test_invalid_partition_rejected():
    with pytest.raises(PreconditionError):
        centered(list(SEGMENT_PAIR))


# ---------------------------------------------------------------- normalization


def test_center_and_properize():
    base = centered(cube_pair(2))
    assert center_and_properize(base) == base
    moved = NefPartition(
        (cube(2, 0, 1).translate((3, 1)), cube(2, -1, 0).translate((-3, -1))),
        ((3, 1), (-3, -1)),
    )
    assert center_and_properize(moved) == base
    with_zero = centered([cube(2, -1, 1), LatticePolytope([(0, 0)])])
    out = center_and_properize(with_zero)
    assert out.r == 1 and out.dropped == 1
    assert out.sum.is_reflexive()


def test_zero_part_dualizes_to_zero():
    np_ = centered([cube(2, -1, 1), LatticePolytope([(0, 0)])])
    nab = dual_nef(np_)
    assert nab.parts[1].dim == 0
    assert nab.parts[0] == dual_polytope(cube(2, -1, 1)).to_lattice()


# ---------------------------------------------------------------- duality


@pytest.mark.parametrize("d", [2, 3, 4])
def test_cube_pair_dual_simplices(d):
    nab = dual_nef(centered(cube_pair(d)))
    ones = (1,) * d
    # {sum x >= -1, x <= 0} and {sum x <= 1, x >= 0}
    f1 = {(ones, 1)} | {(_e(d, i, -1), 0) for i in range(d)}
    f2 = {(tuple(-x for x in ones), 1)} | {(_e(d, i), 0) for i in range(d)}
    assert set(nab.parts[0].facets) == f1
    assert set(nab.parts[1].facets) == f2
    assert set(nab.parts[0].vertices) == {(0,) * d} | {_e(d, i, -1) for i in range(d)}
    assert dual_nef(nab) == centered(cube_pair(d))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_cube_pair_vertex_formula_and_count(d):
    np_ = centered(cube_pair(d))
    assert nef_vertex_formula(np_).agree
    rep = lattice_point_count_identity(np_)
    assert rep.equal
    assert rep.dual_sum_points == 2 * d + 1
    assert rep.part_points == (d + 1, d + 1)


def test_axes_pair_self_dual():
    np_ = centered(list(AXES))
    assert dual_nef(np_) == np_
    assert lattice_point_count_identity(np_).equal


def test_lower_dimensional_parts_count_identity():
    # parts of dimensions 1, 1 and 2 in Z^3
    parts = [
        LatticePolytope([(0, 0, 0), (1, 0, 0)]),
        LatticePolytope([(0, 0, 0), (-1, 0, 0)]),
        LatticePolytope([(0, 0, 1), (0, 0, -1), (0, 1, 0), (0, -1, 0)]),
    ]
    np_ = centered(parts)
    assert [P.dim for P in np_.parts] == [1, 1, 2]
    assert lattice_point_count_identity(np_).equal
    assert nef_vertex_formula(np_).agree


def test_cones_meet_trivially():
    assert cones_meet_trivially([(1, 0), (0, 1)], [(-1, 0), (0, -1)])
    assert not cones_meet_trivially([(1, 0), (0, 1)], [(1, 1)])
    assert not cones_meet_trivially([(1, 0), (1, 2)], [(1, 1), (0, -1)])
    assert cones_meet_trivially([(1, 0)], [(0, 0)])


def _nef_invariants(np_):
    nab = dual_nef(np_)
    assert dual_nef(nab) == np_
    zero = (0,) * np_.ambient_dim
    for i in range(np_.r):
        assert (np_.parts[i].dim == 0) == (nab.parts[i].dim == 0)
        for j in range(i + 1, np_.r):
            A, B = nab.parts[i], nab.parts[j]
            assert cones_meet_trivially(A.vertices, B.vertices)
            common = set(A.lattice_points()) & set(B.lattice_points())
            assert common <= {zero}
    Dstar = dual_polytope(np_.sum).to_lattice()
    assert convex_hull_union(nab.parts) == Dstar
    assert convex_hull_union(np_.parts) == dual_polytope(nab.sum).to_lattice()
    assert hstar(cayley_polytope(np_.parts)) == hstar(convex_hull_union(np_.parts))
    for Q in nab.parts:
        for v in Q.vertices:
            assert v == zero or v in Dstar.vertices


@pytest.mark.parametrize("d", [1, 2, 3])
def test_invariants_cube_pair(d):
    _nef_invariants(centered(cube_pair(d)))


def test_invariants_axes_and_lower_dim():
    _nef_invariants(centered(list(AXES)))
    _nef_invariants(direct_product(centered(cube_pair(1)), centered(list(AXES))))


def _split_polygon(k, mask):
    P = POLYGONS[k % len(POLYGONS)]
    V = P.vertices
    E1 = [v for i, v in enumerate(V) if mask >> i & 1]
    E2 = [v for i, v in enumerate(V) if not mask >> i & 1]
    if not E1 or not E2:
        return None
    try:
        return centered([LatticePolytope([(0, 0)] + E1), LatticePolytope([(0, 0)] + E2)])
    except PreconditionError:
        return None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 15), st.integers(0, 2**9))
def test_random_2d_nef_partitions(k, mask):
    np_ = _split_polygon(k, mask)
    if np_ is None:
        return
    assert nef_vertex_formula(np_).agree
    assert lattice_point_count_identity(np_).equal
    _nef_invariants(np_)


def test_random_2d_corpus_nonempty():
    found = [np_ for k in range(16) for mask in range(1, 2**9) if (np_ := _split_polygon(k, mask)) is not None]
    assert len(found) >= 10


# ---------------------------------------------------------------- collect


@pytest.mark.parametrize("d", [2, 3])
def test_collect_cube_pair(d):
    np_ = centered(cube_pair(d))
    one = collect(np_, [[0, 1]])
    assert one.verified
    assert one.partition.r == 1
    assert one.partition.parts[0] == cube(d, -1, 1)
    assert one.dual.parts[0] == dual_polytope(cube(d, -1, 1)).to_lattice()
    same = collect(np_, [[0], [1]])
    assert same.verified and same.partition == np_


def test_collect_product_blocks():
    np_ = direct_product(centered(cube_pair(1)), centered(cube_pair(1)))
    rep = collect(np_, [[0, 2], [1, 3]])
    assert rep.verified
    assert rep.partition.parts[0] == cube(2, 0, 1)


def test_collect_rejects_bad_blocks():
    np_ = centered(cube_pair(2))
    for bad in ([[0]], [[0, 1], [1]], [[0], [], [1]], [[0], [2]]):
        with pytest.raises(PreconditionError):
            collect(np_, bad)


# ---------------------------------------------------------------- project


def test_project_axes():
    rep = project_nef(centered(list(AXES)), [1])
    assert rep.partition.ambient_dim == 1
    assert {P.vertices for P in rep.partition.parts} == {((-1,), (1,)), ((0,),)}
    assert rep.face == LatticePolytope([(-1, 0), (1, 0)])
    assert rep.smallest_face and rep.dual_ok and rep.polar_ok
    assert rep.dimension_law
    assert rep.face.dim + rep.dim_sum_part == 2


def test_project_product():
    np_ = direct_product(centered(cube_pair(2)), centered(list(AXES)))
    rep = project_nef(np_, [2, 3])
    assert rep.partition.ambient_dim == 2
    assert rep.dual_ok and rep.polar_ok and rep.smallest_face and rep.dimension_law


def test_project_guards():
    np_ = centered(cube_pair(2))
    with pytest.raises(PreconditionError):
        project_nef(np_, [0])
    with pytest.raises(PreconditionError):
        project_nef(np_, [0, 1])


# ---------------------------------------------------------------- decompose


@pytest.mark.parametrize("d", [1, 2, 3])
def test_cube_pair_irreducible(d):
    rep = decompose_irreducible(centered(cube_pair(d)))
    assert rep.blocks == ((0, 1),)
    assert rep.ok


def test_box_product_two_components():
    np_ = direct_product(centered(cube_pair(1)), centered(cube_pair(1)))
    rep = decompose_irreducible(np_)
    assert rep.blocks == ((0, 1), (2, 3))
    assert rep.ok and rep.direct_sum
    assert np_.r == 2 * np_.ambient_dim and rep.crosspolytope is True
    for comp in rep.components:
        assert comp == centered(cube_pair(1))


def test_product_of_three():
    a = centered(cube_pair(1))
    b = centered(list(AXES))
    np_ = direct_product(direct_product(a, b), centered(cube_pair(2)))
    rep = decompose_irreducible(np_)
    assert rep.blocks == ((0, 1), (2,), (3,), (4, 5))
    assert rep.ok


@pytest.mark.parametrize("perm", [(1, 0, 3, 2), (3, 2, 1, 0), (2, 0, 3, 1)])
def test_decomposition_permutation_invariant(perm):
    np_ = direct_product(centered(cube_pair(1)), centered(list(AXES)))
    base = {frozenset(b) for b in decompose_irreducible(np_).blocks}
    permuted = centered([np_.parts[i] for i in perm])
    got = {frozenset(perm[i] for i in b) for b in decompose_irreducible(permuted).blocks}
    assert got == base


def test_decompose_requires_proper():
    with pytest.raises(PreconditionError):
        decompose_irreducible(centered([cube(2, -1, 1), LatticePolytope([(0, 0)])]))


# ---------------------------------------------------------------- cancel


def test_cancel_counter_example():
    rep = cancel_check(CANCEL_P, CANCEL_Q)
    assert not rep.sum_reflexive
    assert rep.sum_interior_points == 1
    assert "sum not reflexive" in rep.failures
    assert "Q has no interior lattice point" in rep.failures
    assert rep.p_interior_point
    assert not rep.hypotheses_hold and rep.consistent


def test_cancel_trivial():
    rep = cancel_check(LatticePolytope([(-1,), (1,)]), LatticePolytope([(0,)]))
    assert rep.hypotheses_hold and rep.consistent
    assert rep.p_reflexive and rep.q_reflexive
    assert rep.partition is not None and rep.failures == ()


def test_cancel_cube_pair():
    # [0,1]^d has no interior lattice point, so the hypothesis does not apply
    P, Q = cube_pair(2)
    rep = cancel_check(P, Q)
    assert rep.sum_reflexive and rep.partition is not None
    assert rep.consistent
    assert rep.failures == ("P has no interior lattice point", "Q has no interior lattice point", "P not reflexive", "Q not reflexive")


def test_cancel_on_reflexive_pairs():
    P, Q = AXES
    rep = cancel_check(P, Q)
    assert rep.hypotheses_hold and rep.consistent and rep.failures == ()


@pytest.mark.parametrize("k", range(16))
def test_length_bound_on_polygon_corpus(k):
    for mask in range(1, 2 ** POLYGONS[k].n_vertices - 1):
        np_ = _split_polygon(k, mask)
        if np_ is None or not np_.proper:
            continue
        rep = decompose_irreducible(np_)
        assert rep.length_bound and rep.ok
