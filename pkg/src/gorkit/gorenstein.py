"""Gorenstein polytopes and cones, their duals, and refined lattices.

The cone over a polytope ``P ⊂ R^d`` lives in ``R^(d+1)`` with generators
``(v, 1)`` and degree functional ``n = e_(d+1)``. Facet normals of the cone
``(u_F, a_F)`` are the rays of the dual cone; the dual cone is Gorenstein
exactly when some ``m̄`` pairs to 1 with all of them, and then ``m̄ = (m, r)``
with ``r`` the index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import PreconditionError
from .lattice import (
    complete_to_unimodular,
    hnf,
    identity,
    inverse_unimodular,
    matvec,
    snf,
    solve_unique,
    transpose,
)
from .polytope import LatticePolytope, dual_polytope


@dataclass(frozen=True)
class GorensteinData:
    """Index ``r``, interior point ``x`` at distance ``1/r`` from all facets, and ``rP - m``."""

    index: int
    interior_point: tuple[Fraction, ...]
    m: tuple[int, ...]
    reflexive: LatticePolytope = field(compare=False, repr=False)


def gorenstein_data(P: LatticePolytope) -> GorensteinData | None:
    """Return the Gorenstein data of ``P`` or ``None`` if ``P`` is not Gorenstein.

    Solves ``<u_F, z> + a_F = s`` for all facets at once; ``P`` is Gorenstein
    of index ``r`` exactly when ``s = 1/r`` for a positive integer ``r`` and
    ``r z`` is a lattice point. Works in the affine chart of ``P``.
    """
    if P.dim == 0:
        return None
    k = P.dim
    rows = [tuple(u) + (-1,) for u, _ in P.facets]
    rhs = [-a for _, a in P.facets]
    sol = solve_unique(rows, rhs)
    if sol is None:
        return None
    z, s = sol[:k], sol[k]
    if s <= 0 or s.numerator != 1:
        return None
    r = s.denominator
    rz = [r * c for c in z]
    if any(c.denominator != 1 for c in rz):
        return None
    x = tuple(Fraction(c) for c in P.chart.from_chart(z))
    m = tuple(int(r * c) for c in x)
    witness = P.dilate(r).translate(tuple(-c for c in m))
    return GorensteinData(index=r, interior_point=x, m=m, reflexive=witness)


def is_gorenstein(P: LatticePolytope) -> bool:
    return gorenstein_data(P) is not None


def _hyperplane_chart(n: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Unimodular ``phi`` whose last coordinate is the pairing with ``n``."""
    D = len(n)
    if tuple(n) == tuple(int(i == D - 1) for i in range(D)):
        return identity(D)
    return complete_to_unimodular(n)


class GorensteinCone:
    """Cone generated by lattice points on the hyperplane ``<x, n> = 1``.

    ``rays`` are the minimal generators, ``n_sigma`` the degree functional.
    ``chart`` is a unimodular matrix whose last row is ``n_sigma``; the first
    ``D - 1`` chart coordinates of the generators give the support polytope.
    """

    def __init__(self, rays: Sequence[Sequence[int]], n_sigma: Sequence[int], support=None):
        self.n_sigma = tuple(int(x) for x in n_sigma)
        D = len(self.n_sigma)
        self.ambient_dim = D
        self.chart = _hyperplane_chart(self.n_sigma)
        pts = []
        for x in rays:
            if sum(a * b for a, b in zip(x, self.n_sigma)) != 1:
                raise PreconditionError("generator not on the degree-one hyperplane")
            pts.append(matvec(self.chart, x)[:-1])
        self.support = support if support is not None else LatticePolytope(pts)
        if not self.support.is_full_dimensional:
            raise PreconditionError("cone is not full-dimensional")
        self._chart_inv = inverse_unimodular(self.chart)
        self.rays = tuple(sorted(self.lift(v) for v in self.support.vertices))

    def __repr__(self) -> str:
        return f"GorensteinCone(rays={list(self.rays)}, n_sigma={self.n_sigma})"

    def lift(self, z: Sequence[int], k: int = 1) -> tuple[int, ...]:
        """Cone point of degree ``k`` with support chart coordinates ``z``."""
        return matvec(self._chart_inv, tuple(z) + (k,))

    def project(self, x: Sequence[int]) -> tuple[int, ...]:
        return matvec(self.chart, x)[:-1]

    @cached_property
    def facet_normals(self) -> tuple[tuple[int, ...], ...]:
        """Primitive inner facet normals in the dual lattice, one per support facet."""
        phiT = transpose(self.chart)
        return tuple(matvec(phiT, tuple(u) + (a,)) for u, a in self.support.facets)

    @cached_property
    def m_dual(self) -> tuple[int, ...] | None:
        """The dual degree functional, or ``None`` if the cone is not reflexive."""
        sol = solve_unique(self.facet_normals, [1] * len(self.facet_normals))
        if sol is None or any(c.denominator != 1 for c in sol):
            return None
        return tuple(int(c) for c in sol)

    @property
    def is_reflexive(self) -> bool:
        return self.m_dual is not None

    @property
    def index(self) -> int | None:
        md = self.m_dual
        return None if md is None else sum(a * b for a, b in zip(md, self.n_sigma))

    def dual(self) -> "GorensteinCone":
        if self.m_dual is None:
            raise PreconditionError("cone is not reflexive Gorenstein")
        return GorensteinCone(self.facet_normals, self.m_dual)

    def slice(self, k: int) -> LatticePolytope:
        """Degree-``k`` slice in support chart coordinates, i.e. ``k`` times the support."""
        return self.support.dilate(k)

    def contains(self, x: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(w, x)) >= 0 for w in self.facet_normals)


def cone_over(P: LatticePolytope) -> GorensteinCone:
    if not P.is_full_dimensional:
        raise PreconditionError("cone_over needs a full-dimensional polytope")
    d = P.ambient_dim
    return GorensteinCone([v + (1,) for v in P.vertices], (0,) * d + (1,), support=P)


def slice(sigma: GorensteinCone, k: int) -> LatticePolytope:
    return sigma.slice(k)


@dataclass
class DualPair:
    """A Gorenstein polytope together with its dual Gorenstein polytope.

    ``facet_to_vertex[i]`` is the index in ``P_dual.vertices`` of the vertex
    corresponding to facet ``i`` of ``P``. ``cone`` is the cone over ``P`` and
    ``dual_cone`` its dual; ``P_dual`` is the support of ``dual_cone`` in the
    chart ``dual_cone.chart`` (last row ``m̄ = (m, r)``).
    """

    P: LatticePolytope
    P_dual: LatticePolytope
    index: int
    cone: GorensteinCone
    dual_cone: GorensteinCone
    facet_to_vertex: tuple[int, ...]

    @cached_property
    def vertex_to_facet(self) -> tuple[int, ...]:
        """For each vertex of ``P``, the facet index of ``P_dual`` dual to it."""
        out = []
        for vi in range(self.P.n_vertices):
            mask = 0
            for fi, fm in enumerate(self.P.facet_masks):
                if fm >> vi & 1:
                    mask |= 1 << self.facet_to_vertex[fi]
            out.append(self.P_dual.facet_masks.index(mask))
        return tuple(out)

    def dual_face(self, mask: int) -> int:
        """Face of ``P_dual`` dual to the face of ``P`` with vertex mask ``mask``."""
        out = 0
        for fi, fm in enumerate(self.P.facet_masks):
            if fm & mask == mask:
                out |= 1 << self.facet_to_vertex[fi]
        return out

    def dual_face_inverse(self, mask: int) -> int:
        """Face of ``P`` dual to the face of ``P_dual`` with vertex mask ``mask``."""
        out = 0
        for vi in range(self.P.n_vertices):
            fmask = self.P_dual.facet_masks[self.vertex_to_facet[vi]]
            if fmask & mask == mask:
                out |= 1 << vi
        return out

    def lift_dual(self, z: Sequence[int]) -> tuple[int, ...]:
        """Dual lattice point ``(u, a)`` for a point of ``P_dual`` in chart coordinates."""
        return self.dual_cone.lift(z)

    def swapped(self) -> "DualPair":
        """The same pair seen from the dual side (``P_dual`` first)."""
        return dual_gorenstein(self.P_dual)


def dual_gorenstein(P: LatticePolytope) -> DualPair:
    g = gorenstein_data(P)
    if g is None or not P.is_full_dimensional:
        raise PreconditionError("polytope is not a full-dimensional Gorenstein polytope")
    sigma = cone_over(P)
    dual = sigma.dual()
    Pd = dual.support
    index = {v: i for i, v in enumerate(Pd.vertices)}
    f2v = tuple(index[dual.project(w)] for w in sigma.facet_normals)
    return DualPair(P=P, P_dual=Pd, index=g.index, cone=sigma, dual_cone=dual, facet_to_vertex=f2v)


@dataclass(frozen=True)
class RefinedLatticeReport:
    index: int
    lattice_index: int
    dual_boundary: tuple[tuple[int, ...], ...]
    polar_boundary: tuple[tuple[int, ...], ...]
    equal: bool


def refined_lattice_check(P: LatticePolytope) -> RefinedLatticeReport:
    """Compare boundary lattice points of the dual Gorenstein polytope with ``(rP - m)*``.

    A point ``y = (u, t)`` of the dual space on the hyperplane ``<m̄, y> = 1``
    lies in the refined lattice ``N̄ + (1/r) Z n`` iff ``u`` is integral, and
    it lies in the dual cone iff ``u`` is in the polar of ``rP - m``. Both
    sides are reported as points ``(u, t)`` of ``N̄``.
    """
    pair = dual_gorenstein(P)
    g = gorenstein_data(P)
    r = g.index
    D = P.ambient_dim + 1
    n = (0,) * (D - 1) + (1,)
    # r * N̄^(r) is generated by r e_i and n; its index over r N̄ is r
    gens = [tuple(r * int(i == j) for j in range(D)) for i in range(D)] + [n]
    H, _ = hnf(gens)
    basis = [row for row in H if any(row)]
    S, _, _ = snf(basis)
    covolume = 1
    for i in range(D):
        covolume *= S[i][i]
    lattice_index = r**D // covolume

    dual_pts = sorted(pair.lift_dual(z) for z in pair.P_dual.lattice_points("boundary"))
    polar = dual_polytope(g.reflexive).to_lattice()
    polar_pts = []
    for u in polar.lattice_points("boundary"):
        t = Fraction(1 - sum(a * b for a, b in zip(g.m, u)), r)
        if t.denominator == 1:
            polar_pts.append(tuple(u) + (int(t),))
        else:
            polar_pts.append(None)  # boundary point outside N̄: the identity fails
    polar_pts_clean = sorted(p for p in polar_pts if p is not None)
    equal = None not in polar_pts and tuple(polar_pts_clean) == tuple(dual_pts)
    return RefinedLatticeReport(
        index=r,
        lattice_index=lattice_index,
        dual_boundary=tuple(dual_pts),
        polar_boundary=tuple(polar_pts_clean),
        equal=equal,
    )
