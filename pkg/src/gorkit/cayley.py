"""Cayley polytopes, Cayley structures, special simplices and their projections."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError
from .gorenstein import (
    DualPair,
    GorensteinCone,
    cone_over,
    dual_gorenstein,
    gorenstein_data,
)
from .lattice import hnf, matvec, quotient_projection, rank, solve_unique, transpose
from .polytope import LatticePolytope, dual_polytope, get_enumeration_cap, minkowski_sum_all
from .errors import EnumerationCapError


def cayley_polytope(parts: Sequence[LatticePolytope]) -> LatticePolytope:
    """``Conv(P_1 × e_1, ..., P_r × e_r)`` in the chart ``(x, y_1, ..., y_{r-1})``.

    Part ``i < r`` sits at ``y = e_i`` and the last part at ``y = 0``.
    """
    r = len(parts)
    if r == 0:
        raise PreconditionError("need at least one part")
    d = parts[0].ambient_dim
    if any(P.ambient_dim != d for P in parts):
        raise PreconditionError("parts have different ambient dimensions")
    pts = []
    for i, P in enumerate(parts):
        y = tuple(int(j == i) for j in range(r - 1))
        pts.extend(v + y for v in P.vertices)
    return LatticePolytope(pts)


@dataclass
class CayleyCheck:
    cone_reflexive_index_r: bool
    cayley_gorenstein_index_r: bool
    sum_reflexive: bool
    m_dual: tuple[int, ...] | None
    expected_m_dual: tuple[int, ...] | None

    @property
    def equivalent(self) -> bool:
        return self.cone_reflexive_index_r == self.cayley_gorenstein_index_r == self.sum_reflexive

    @property
    def holds(self) -> bool:
        return self.cone_reflexive_index_r and self.cayley_gorenstein_index_r and self.sum_reflexive


def cayley_gorenstein_check(parts: Sequence[LatticePolytope]) -> CayleyCheck:
    """Compare the three characterizations of a reflexive Cayley cone of index ``r``."""
    r = len(parts)
    S = minkowski_sum_all(parts)
    if not S.is_full_dimensional:
        raise PreconditionError("the Minkowski sum is not full-dimensional")
    C = cayley_polytope(parts)
    sigma = cone_over(C)
    cone_ok = sigma.index == r
    g = gorenstein_data(C)
    gor_ok = g is not None and g.index == r
    gs = gorenstein_data(S)
    sum_ok = gs is not None and gs.index == 1
    expected = tuple(gs.m) + (1,) * (r - 1) + (r,) if sum_ok else None
    return CayleyCheck(cone_ok, gor_ok, sum_ok, sigma.m_dual, expected)


# --------------------------------------------------------------------------
# subset search


def _subsets_with_sum(points: Sequence[tuple[int, ...]], r: int, target: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Index tuples ``i_1 < ... < i_r`` of distinct points summing to ``target``."""
    n = len(points)
    where = {p: i for i, p in enumerate(points)}

    def sub(a, b):
        return tuple(x - y for x, y in zip(a, b))

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    if r == 1:
        return [(where[target],)] if target in where else []
    if r == 2:
        out = []
        for i, p in enumerate(points):
            j = where.get(sub(target, p))
            if j is not None and j > i:
                out.append((i, j))
        return out
    if r == 4:
        limit = get_enumeration_cap()
        if n * (n - 1) // 2 > limit:
            raise EnumerationCapError("enumeration cap exceeded in pair table")
        pairs: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for i in range(n):
            for j in range(i + 1, n):
                pairs.setdefault(add(points[i], points[j]), []).append((i, j))
        out = set()
        for s1, lst in pairs.items():
            for i, j in lst:
                for k, l in pairs.get(sub(target, s1), ()):
                    if j < k:
                        out.add((i, j, k, l))
        return sorted(out)
    # backtracking: fix the smallest index, recurse
    out = []
    for i in range(n):
        rest = points[i + 1:]
        for tail in _subsets_with_sum(rest, r - 1, sub(target, points[i])):
            out.append((i,) + tuple(i + 1 + t for t in tail))
    return out


def _affinely_independent(pts: Sequence[Sequence[int]]) -> bool:
    if len(pts) <= 1:
        return True
    base = pts[0]
    return rank([tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]) == len(pts) - 1


# --------------------------------------------------------------------------
# special simplices


@dataclass(frozen=True)
class SpecialSimplex:
    vertices: tuple[tuple[int, ...], ...]

    @property
    def r(self) -> int:
        return len(self.vertices)

    @property
    def barycenter(self) -> tuple[Fraction, ...]:
        r = len(self.vertices)
        return tuple(Fraction(sum(c), r) for c in zip(*self.vertices))


def _facet_counts(P: LatticePolytope, pts) -> list[int]:
    out = []
    for u, a in P.facets:
        out.append(sum(1 for p in pts if sum(x * y for x, y in zip(u, P.chart.to_chart(p))) + a == 0))
    return out


def is_special(P: LatticePolytope, pts: Sequence[Sequence[int]]) -> bool:
    """Affinely independent lattice points of ``P`` with every facet containing all but one."""
    pts = [tuple(p) for p in pts]
    r = len(pts)
    if len(set(pts)) != r or not _affinely_independent(pts):
        return False
    if not all(P.contains(p) for p in pts):
        return False
    return all(c == r - 1 for c in _facet_counts(P, pts))


def special_simplices(P: LatticePolytope) -> list[SpecialSimplex]:
    """All special ``(r-1)``-simplices of a Gorenstein polytope of index ``r``."""
    g = gorenstein_data(P)
    if g is None:
        raise PreconditionError("polytope is not Gorenstein")
    r = g.index
    pts = P.lattice_points()
    out = []
    for idx in _subsets_with_sum(pts, r, g.m):
        S = [pts[i] for i in idx]
        if not _affinely_independent(S):
            continue
        counts = _facet_counts(P, S)
        if any(c != r - 1 for c in counts):
            raise AssertionError("lattice points summing to the interior point must form a special simplex")
        out.append(SpecialSimplex(tuple(S)))
    return sorted(out, key=lambda s: s.vertices)


# --------------------------------------------------------------------------
# Cayley structures


@dataclass(frozen=True)
class CayleyStructure:
    """Functionals ``e*_i`` summing to the degree functional, and the induced parts.

    ``functionals`` live in the dual lattice of the cone over ``P``; the parts
    are faces of ``P`` given by their vertex lists.
    """

    functionals: tuple[tuple[int, ...], ...]
    parts: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def r(self) -> int:
        return len(self.functionals)

    def part_polytopes(self) -> list[LatticePolytope]:
        return [LatticePolytope(p) for p in self.parts]


def structure_from_functionals(P: LatticePolytope, functionals) -> CayleyStructure:
    parts = []
    for e in functionals:
        verts = tuple(v for v in P.vertices if sum(a * b for a, b in zip(v + (1,), e)) == 1)
        parts.append(verts)
    return CayleyStructure(tuple(functionals), tuple(parts))


def cayley_structures(P: LatticePolytope, pair: DualPair | None = None) -> list[CayleyStructure]:
    """Every way of writing ``P`` as a Cayley polytope of length ``index(P)``."""
    pair = pair or dual_gorenstein(P)
    r = pair.index
    D = P.ambient_dim + 1
    n = (0,) * (D - 1) + (1,)
    pts = sorted(pair.lift_dual(z) for z in pair.P_dual.lattice_points())
    out = []
    for idx in _subsets_with_sum(pts, r, n):
        fs = tuple(pts[i] for i in idx)
        st = structure_from_functionals(P, fs)
        # every vertex must pair to 1 with exactly one functional
        for v in P.vertices:
            vals = [sum(a * b for a, b in zip(v + (1,), e)) for e in fs]
            if sorted(vals) != [0] * (r - 1) + [1]:
                raise AssertionError("functionals do not split the vertex set")
        out.append(st)
    return sorted(out, key=lambda s: s.functionals)


# --------------------------------------------------------------------------
# projection along a special simplex


@dataclass
class Projection:
    """Image of a Gorenstein polytope under the projection along a special simplex.

    ``G`` is an integer basis (rows) of ``r N'`` where ``N' = Z^d + Z x``;
    refined coordinates of ``q`` are ``c(q) = r q G^{-1}``. ``quotient`` maps
    refined coordinates onto the quotient lattice.
    """

    polytope: LatticePolytope
    source: LatticePolytope
    simplex: SpecialSimplex
    index: int
    m: tuple[int, ...]
    G: tuple[tuple[int, ...], ...]
    quotient: object

    def refined_coords(self, q: Sequence) -> tuple[int, ...]:
        """Coordinates in ``N'`` of ``q / r`` for an integer vector ``q`` of ``r N'``."""
        sol = solve_unique(transpose(self.G), list(q))
        if any(c.denominator != 1 for c in sol):
            raise ValueError("vector is not in the refined lattice")
        return tuple(int(c) for c in sol)

    def image(self, y: Sequence[int], t: int = 1) -> tuple[int, ...]:
        """Image of the point ``y`` of ``t P`` (shifted by ``t x``)."""
        r = self.index
        return self.quotient(self.refined_coords(tuple(r * a - t * b for a, b in zip(y, self.m))))

    def lift_functional(self, w: Sequence[int]) -> tuple[int, ...]:
        """Linear functional on the cone over the source polytope induced by ``w``.

        ``h(y, t) = <w, image(y, t)> + t``; it is nonnegative on the cone when
        ``w`` lies in the polar of the projected polytope.
        """
        d = self.source.ambient_dim
        cols = []
        for i in range(d + 1):
            e = tuple(int(j == i) for j in range(d + 1))
            val = sum(a * b for a, b in zip(w, self.image(e[:d], e[d]))) + e[d]
            cols.append(val)
        return tuple(cols)


def project_along_special(P: LatticePolytope, S: SpecialSimplex | Sequence[Sequence[int]]) -> Projection:
    """Project ``P`` along ``aff(S)`` in the refined lattice ``Z^d + Z x``."""
    if not isinstance(S, SpecialSimplex):
        S = SpecialSimplex(tuple(tuple(p) for p in S))
    g = gorenstein_data(P)
    if g is None or not P.is_full_dimensional:
        raise PreconditionError("polytope is not a full-dimensional Gorenstein polytope")
    r = g.index
    if S.r != r or not is_special(P, S.vertices):
        raise PreconditionError("not a special simplex")
    d = P.ambient_dim
    gens = [tuple(r * int(i == j) for j in range(d)) for i in range(d)] + [g.m]
    H, _ = hnf(gens)
    G = tuple(row for row in H if any(row))
    proj = Projection(
        polytope=None,  # type: ignore[arg-type]
        source=P,
        simplex=S,
        index=r,
        m=g.m,
        G=G,
        quotient=None,
    )
    kernel = [proj.refined_coords(tuple(r * a - b for a, b in zip(n, g.m))) for n in S.vertices]
    proj.quotient = quotient_projection(kernel, d)
    proj.polytope = LatticePolytope([proj.image(v) for v in P.vertices])
    return proj


def polar_lift(proj: Projection, pair: DualPair) -> list[tuple[int, ...]]:
    """Lift the vertices of the polar of the projection back to the primal cone.

    ``pair.P_dual`` must be the source polytope of ``proj``. The results are
    lattice points of degree ``r`` of the cone over ``pair.P``.
    """
    if pair.P_dual != proj.source:
        raise PreconditionError("projection source is not the dual side of the pair")
    phiT = transpose(pair.dual_cone.chart)
    polar = dual_polytope(proj.polytope).to_lattice()
    return sorted(matvec(phiT, proj.lift_functional(w)) for w in polar.vertices)


# --------------------------------------------------------------------------
# direct sums and integral closure


def direct_sum(s1: GorensteinCone, s2: GorensteinCone) -> GorensteinCone:
    if not (s1.is_reflexive and s2.is_reflexive):
        raise PreconditionError("both cones must be reflexive")
    a, b = s1.ambient_dim, s2.ambient_dim
    rays = [x + (0,) * b for x in s1.rays] + [(0,) * a + y for y in s2.rays]
    return GorensteinCone(rays, s1.n_sigma + s2.n_sigma)


def has_special_simplex(sigma: GorensteinCone) -> bool:
    """Whether the support of ``sigma`` contains a special ``(r-1)``-simplex."""
    return bool(special_simplices(sigma.support))


def integrally_closed(P: LatticePolytope, max_degree: int | None = None) -> bool:
    """Check that every lattice point of ``kP`` is a sum of ``k`` lattice points of ``P``.

    By default checks degrees up to ``max(index, dim - 1)``; lattice points of
    the cone in higher degree are generated by those up to ``dim - 1``.
    """
    if max_degree is None:
        g = gorenstein_data(P)
        max_degree = max(g.index if g else 1, P.dim - 1)
    base = P.lattice_points()
    layer = set(base)
    cap = get_enumeration_cap()
    for k in range(2, max_degree + 1):
        if len(layer) * len(base) > cap:
            raise EnumerationCapError("enumeration cap exceeded in sumset")
        layer = {tuple(a + b for a, b in zip(p, q)) for p in layer for q in base}
        target = set(P.dilate_lattice_points(k))
        if target - layer:
            return False
    return True
