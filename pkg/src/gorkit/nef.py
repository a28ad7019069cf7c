"""Nef-partitions: detection, centering, duality and the block operations.

Parts are :class:`LatticePolytope` objects in ``M = Z^d``; the dual parts
live in ``N = Z^d`` with the standard pairing. Block indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from ._dd import extreme_rays
from .errors import PreconditionError
from .gorenstein import gorenstein_data
from .lattice import quotient_projection, rank, saturation, solve_unique, transpose
from .polytope import (
    AffineChart,
    LatticePolytope,
    convex_hull_union,
    dual_polytope,
    minkowski_sum_all,
)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


@dataclass(frozen=True)
class NefPartition:
    """Lattice polytopes ``parts`` with witnesses ``points[i] ∈ parts[i]`` summing to ``m``.

    Construction checks that the Minkowski sum is reflexive with respect to
    ``m = sum(points)``. ``dropped`` counts zero parts removed by
    :func:`center_and_properize`.
    """

    parts: tuple[LatticePolytope, ...]
    points: tuple[tuple[int, ...], ...]
    dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "points", tuple(tuple(int(x) for x in p) for p in self.points))
        if not self.parts or len(self.parts) != len(self.points):
            raise PreconditionError("need one witness point per part")
        d = self.parts[0].ambient_dim
        if any(P.ambient_dim != d for P in self.parts):
            raise PreconditionError("ambient dimensions differ")
        for P, p in zip(self.parts, self.points):
            if not P.contains(p):
                raise PreconditionError(f"witness {p} is not in its part")
        S = self.sum
        if not S.is_full_dimensional:
            raise PreconditionError("Minkowski sum is not full-dimensional")
        if not S.translate(tuple(-x for x in self.m)).is_reflexive():
            raise PreconditionError("Minkowski sum is not reflexive with respect to the witness sum")

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def ambient_dim(self) -> int:
        return self.parts[0].ambient_dim

    @property
    def m(self) -> tuple[int, ...]:
        out = (0,) * self.ambient_dim
        for p in self.points:
            out = _vadd(out, p)
        return out

    @property
    def centered(self) -> bool:
        return all(not any(p) for p in self.points)

    @property
    def proper(self) -> bool:
        return all(P.dim > 0 for P in self.parts)

    @cached_property
    def sum(self) -> LatticePolytope:
        return minkowski_sum_all(self.parts)

    def same_parts(self, other: "NefPartition") -> bool:
        return self.parts == other.parts

    def __repr__(self) -> str:
        body = ", ".join(str(list(P.vertices)) for P in self.parts)
        return f"NefPartition(r={self.r}, parts=[{body}])"


def centered(parts: Sequence[LatticePolytope]) -> NefPartition:
    """Centered partition with all witnesses at the origin."""
    d = parts[0].ambient_dim
    return NefPartition(tuple(parts), tuple((0,) * d for _ in parts))


# --------------------------------------------------------------------------
# detection and normalization


def detect_nef(parts: Sequence[LatticePolytope]) -> NefPartition | None:
    """Return the nef-partition with lexicographically first witnesses, or ``None``.

    The sum must be full-dimensional. Witnesses are found by depth-first
    search over lattice points of each part, pruning with membership of the
    remaining target in the sum of the remaining parts.
    """
    parts = tuple(parts)
    S = minkowski_sum_all(parts)
    if not S.is_full_dimensional:
        raise PreconditionError("Minkowski sum is not full-dimensional")
    g = gorenstein_data(S)
    if g is None or g.index != 1:
        return None
    m = g.m
    r = len(parts)
    tails = [None] * r
    for i in range(r - 1, 0, -1):
        tails[i] = parts[i] if i == r - 1 else minkowski_sum_all([parts[i], tails[i + 1]])
    pts = [P.lattice_points() for P in parts]

    def search(i, target):
        if i == r - 1:
            return [target] if parts[i].contains(target) else None
        for p in pts[i]:
            rest = tuple(a - b for a, b in zip(target, p))
            if tails[i + 1].contains(rest):
                tail = search(i + 1, rest)
                if tail is not None:
                    return [p] + tail
        return None

    found = search(0, m)
    if found is None:
        return None
    return NefPartition(parts, tuple(found))


def center_and_properize(np: NefPartition) -> NefPartition:
    """Translate part ``i`` by ``-p_i`` and drop the parts that become ``{0}``."""
    d = np.ambient_dim
    kept = []
    dropped = 0
    for P, p in zip(np.parts, np.points):
        if P.dim == 0:
            dropped += 1
            continue
        kept.append(P.translate(tuple(-x for x in p)))
    if not kept:
        raise PreconditionError("every part is a point")
    return NefPartition(tuple(kept), tuple((0,) * d for _ in kept), dropped=np.dropped + dropped)


# --------------------------------------------------------------------------
# duality


def _solve_system(rows: Iterable[tuple[Sequence[int], int]], d: int) -> LatticePolytope:
    """Lattice polytope ``{y in R^d : <u, y> + a >= 0 for all (u, a)}``.

    Homogenizes to the cone ``{(y, t) : <u, y> + a t >= 0, t >= 0}`` and reads
    vertices off its extreme rays. Raises if the region is unbounded or has
    non-integral vertices.
    """
    A = []
    for u, a in rows:
        row = tuple(int(x) for x in u) + (int(a),)
        if any(row) and row not in A:
            A.append(row)
    A.append((0,) * d + (1,))
    try:
        rays = extreme_rays(A)
    except ValueError:
        raise PreconditionError("inequality system is not bounded") from None
    verts = []
    for ray, _ in rays:
        t = ray[d]
        if t == 0:
            raise PreconditionError("inequality system is not bounded")
        if any(x % t for x in ray[:d]):
            raise PreconditionError("inequality system has a non-integral vertex")
        verts.append(tuple(x // t for x in ray[:d]))
    if not verts:
        raise PreconditionError("inequality system is empty")
    return LatticePolytope(verts)


def dual_part(parts: Sequence[LatticePolytope], i: int) -> LatticePolytope:
    """``{y : <Δ_j, y> >= -δ_ij for all j}`` by vertex enumeration."""
    d = parts[0].ambient_dim
    rows = [(v, int(j == i)) for j, P in enumerate(parts) for v in P.vertices]
    return _solve_system(rows, d)


def dual_nef(np: NefPartition) -> NefPartition:
    """The dual centered nef-partition; zero parts dualize to zero parts."""
    if not np.centered:
        raise PreconditionError("dual_nef needs a centered nef-partition")
    duals = tuple(dual_part(np.parts, i) for i in range(np.r))
    return NefPartition(duals, tuple((0,) * np.ambient_dim for _ in duals))


@dataclass(frozen=True)
class VertexFormulaReport:
    """Nonzero vertices of each dual part, from the filter and from :func:`dual_nef`."""

    filtered: tuple[tuple[tuple[int, ...], ...], ...]
    from_dual: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def agree(self) -> bool:
        return self.filtered == self.from_dual


def nef_vertex_formula(np: NefPartition, dual_sum=None) -> VertexFormulaReport:
    """Keep the vertices ``v`` of ``Δ*`` with ``min_{u ∈ Δ_i} <u, v> = -1``.

    ``dual_sum`` may be passed to reuse a precomputed polar of the sum.
    """
    if not np.centered:
        raise PreconditionError("the vertex formula needs a centered nef-partition")
    D = dual_sum if dual_sum is not None else dual_polytope(np.sum)
    verts = [tuple(int(x) for x in v) for v in D.vertices]
    filtered = []
    for P in np.parts:
        keep = sorted(v for v in verts if min(_dot(u, v) for u in P.vertices) == -1)
        filtered.append(tuple(keep))
    zero = (0,) * np.ambient_dim
    nab = dual_nef(np)
    from_dual = tuple(tuple(v for v in Q.vertices if v != zero) for Q in nab.parts)
    return VertexFormulaReport(filtered=tuple(filtered), from_dual=from_dual)


@dataclass(frozen=True)
class CountIdentityReport:
    dual_sum_points: int
    part_points: tuple[int, ...]

    @property
    def rhs(self) -> int:
        return sum(self.part_points) - len(self.part_points) + 1

    @property
    def equal(self) -> bool:
        return self.dual_sum_points == self.rhs


def lattice_point_count_identity(np: NefPartition) -> CountIdentityReport:
    """Compare ``|Δ* ∩ N|`` with ``sum |∇_i ∩ N| - r + 1``."""
    if not np.centered:
        raise PreconditionError("the count identity needs a centered nef-partition")
    lhs = len(dual_polytope(np.sum).lattice_points())
    nab = dual_nef(np)
    return CountIdentityReport(lhs, tuple(len(Q.lattice_points()) for Q in nab.parts))


def cones_meet_trivially(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> bool:
    """Whether ``cone(A) ∩ cone(B) = {0}``, decided exactly.

    The pairs ``(λ, μ) >= 0`` with ``Σ λ_a a = Σ μ_b b`` form a pointed cone;
    the intersection is trivial iff every extreme ray maps to zero.
    """
    A = [tuple(a) for a in A if any(a)]
    B = [tuple(b) for b in B if any(b)]
    if not A or not B:
        return True
    d = len(A[0])
    n = len(A) + len(B)
    rows = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    for c in range(d):
        eq = tuple(a[c] for a in A) + tuple(-b[c] for b in B)
        if any(eq):
            rows.append(eq)
            rows.append(tuple(-x for x in eq))
    for ray, _ in extreme_rays(rows):
        y = [sum(ray[k] * A[k][c] for k in range(len(A))) for c in range(d)]
        if any(y):
            return False
    return True


# --------------------------------------------------------------------------
# collecting


def _check_blocks(blocks, r: int) -> tuple[tuple[int, ...], ...]:
    out = tuple(tuple(sorted(int(i) for i in b)) for b in blocks)
    flat = [i for b in out for i in b]
    if any(not b for b in out) or sorted(flat) != list(range(r)):
        raise PreconditionError(f"blocks must partition 0..{r - 1} into nonempty sets")
    return out


@dataclass(frozen=True)
class CollectReport:
    """Collected partition, its dual by formula, and the hull side computed directly."""

    blocks: tuple[tuple[int, ...], ...]
    partition: NefPartition
    dual: NefPartition
    hulls: tuple[LatticePolytope, ...]
    support_ok: bool

    @property
    def verified(self) -> bool:
        return self.dual.parts == self.hulls and self.support_ok


def collect(np: NefPartition, blocks) -> CollectReport:
    """Replace each block of parts by its Minkowski sum.

    The dual of the result is computed from the inequality formula and
    compared with the convex hulls of the blocks of the original dual. Each
    block sum is also recomputed as ``{x ∈ Δ : <x, ∇_j> >= 0, j outside}``.
    """
    if not np.centered:
        raise PreconditionError("collect needs a centered nef-partition")
    blocks = _check_blocks(blocks, np.r)
    d = np.ambient_dim
    sums = tuple(minkowski_sum_all([np.parts[i] for i in b]) for b in blocks)
    new = NefPartition(sums, tuple((0,) * d for _ in sums))
    nab = dual_nef(np)
    hulls = tuple(convex_hull_union([nab.parts[i] for i in b]) for b in blocks)
    new_dual = dual_nef(new)

    S = np.sum
    support_ok = True
    for b, Sb in zip(blocks, sums):
        rows = [(tuple(u), a) for u, a in S.facets]
        rows += [(w, 0) for j in range(np.r) if j not in b for w in nab.parts[j].vertices]
        if _solve_system(rows, d) != Sb:
            support_ok = False
    return CollectReport(blocks, new, new_dual, hulls, support_ok)


# --------------------------------------------------------------------------
# projecting


def _span_basis(polys: Iterable[LatticePolytope], d: int):
    return saturation([v for P in polys for v in P.vertices], d)


@dataclass(frozen=True)
class ProjectReport:
    """Result of projecting along ``lin(Δ^J)``.

    ``partition`` lives in the quotient lattice with coordinates given by
    ``quotient``; ``face`` is ``F = ∇_I ∩ (Δ^J)^⊥`` in ``N`` and
    ``face_quotient`` the same face in the dual quotient coordinates.
    """

    J: tuple[int, ...]
    quotient: object
    partition: NefPartition
    face: LatticePolytope
    face_quotient: LatticePolytope
    dual: NefPartition
    dual_by_face: tuple[LatticePolytope, ...]
    smallest_face: bool
    dim_sum_part: int

    @property
    def dual_ok(self) -> bool:
        return self.dual.parts == self.dual_by_face

    @property
    def polar_ok(self) -> bool:
        return dual_polytope(self.partition.sum).to_lattice() == self.face_quotient

    @property
    def dimension_law(self) -> bool:
        return self.face.dim + self.dim_sum_part == self.quotient.ambient_dim


def _smallest_face_containing(P: LatticePolytope, x) -> int:
    """Vertex mask of the smallest face of ``P`` containing ``x``."""
    mask = (1 << P.n_vertices) - 1
    for (u, a), fm in zip(P.facets, P.facet_masks):
        if _dot(u, P.chart.to_chart(x)) + a == 0:
            mask &= fm
    return mask


def project_nef(np: NefPartition, J) -> ProjectReport:
    """Project a centered nef-partition along the span of the parts indexed by ``J``."""
    if not np.centered:
        raise PreconditionError("project_nef needs a centered nef-partition")
    J = tuple(sorted(set(int(j) for j in J)))
    r, d = np.r, np.ambient_dim
    if not J or len(J) == r or any(j < 0 or j >= r for j in J):
        raise PreconditionError("J must be a proper nonempty subset of the parts")
    I = tuple(i for i in range(r) if i not in J)
    K = _span_basis([np.parts[j] for j in J], d)
    if len(K) == d:
        raise PreconditionError("the span of the J parts is full-dimensional")
    q = quotient_projection(K, d)
    proj = tuple(LatticePolytope([q(v) for v in P.vertices]) for P in np.parts)
    k = q.rank
    part = NefPartition(proj, tuple((0,) * k for _ in proj))

    nab = dual_nef(np)
    zero = (0,) * d
    nabla_I = convex_hull_union([nab.parts[i] for i in I])
    perp = [v for v in nabla_I.vertices if all(_dot(v, x) == 0 for x in K)]
    F = LatticePolytope(perp)
    smallest = nabla_I.vertex_mask(perp) == _smallest_face_containing(nabla_I, zero)

    CT = transpose(q.matrix)

    def down(y):
        z = solve_unique(CT, y)
        return tuple(int(c) for c in z)

    Fq = LatticePolytope([down(v) for v in F.vertices])
    by_face = []
    for i in range(r):
        if i in J:
            by_face.append(LatticePolytope([(0,) * k]))
        else:
            vs = [v for v in nab.parts[i].vertices if all(_dot(v, x) == 0 for x in K)]
            by_face.append(LatticePolytope([down(v) for v in vs]))
    sum_J = minkowski_sum_all([np.parts[j] for j in J])
    return ProjectReport(
        J=J,
        quotient=q,
        partition=part,
        face=F,
        face_quotient=Fq,
        dual=dual_nef(part),
        dual_by_face=tuple(by_face),
        smallest_face=smallest,
        dim_sum_part=sum_J.dim,
    )


# --------------------------------------------------------------------------
# decomposing


def _is_crosspolytope(P: LatticePolytope) -> bool:
    """Combinatorial crosspolytope test on the vertex-facet incidences."""
    d = P.dim
    if P.n_vertices != 2 * d or len(P.facets) != 2**d:
        return False
    nv = P.n_vertices
    opposite = []
    for i in range(nv):
        far = [j for j in range(nv) if j != i and not any(fm >> i & 1 and fm >> j & 1 for fm in P.facet_masks)]
        if len(far) != 1:
            return False
        opposite.append(far[0])
    if any(opposite[opposite[i]] != i for i in range(nv)):
        return False
    pairs = {tuple(sorted((i, opposite[i]))) for i in range(nv)}
    for fm in P.facet_masks:
        if any(bool(fm >> a & 1) == bool(fm >> b & 1) for a, b in pairs):
            return False
    return True


@dataclass(frozen=True)
class DecompositionReport:
    """Irreducible blocks, the components in span coordinates, and the checks."""

    blocks: tuple[tuple[int, ...], ...]
    components: tuple[NefPartition, ...]
    bases: tuple[tuple[tuple[int, ...], ...], ...]
    disjoint_cover: bool
    direct_sum: bool
    length_bound: bool
    crosspolytope: bool | None

    @property
    def ok(self) -> bool:
        return self.disjoint_cover and self.direct_sum and self.length_bound and self.crosspolytope is not False


def decompose_irreducible(np: NefPartition) -> DecompositionReport:
    """Split a proper centered nef-partition into irreducible blocks.

    A block ``I`` qualifies when ``0`` lies in the relative interior of
    ``Δ^I``; the irreducible ones are the minimal qualifying sets, found by
    scanning subsets smallest first.
    """
    if not np.centered or not np.proper:
        raise PreconditionError("decomposition needs a proper centered nef-partition")
    r, d = np.r, np.ambient_dim
    zero = (0,) * d
    minimal: list[tuple[int, ...]] = []
    for size in range(1, r + 1):
        for I in combinations(range(r), size):
            if any(set(b) <= set(I) for b in minimal):
                continue
            if minkowski_sum_all([np.parts[i] for i in I]).relative_interior_contains(zero):
                minimal.append(I)
    minimal.sort()
    flat = sorted(i for b in minimal for i in b)
    disjoint_cover = flat == list(range(r))

    bases = []
    comps = []
    for b in minimal:
        B = _span_basis([np.parts[i] for i in b], d)
        bases.append(B)
        chart = AffineChart(origin=zero, basis=B)
        sub = tuple(LatticePolytope([chart.to_chart(v) for v in np.parts[i].vertices]) for i in b)
        comps.append(NefPartition(sub, tuple((0,) * len(B) for _ in sub)))
    all_rows = [row for B in bases for row in B]
    direct_sum = sum(len(B) for B in bases) == d and rank(all_rows) == d
    bound = r <= 2 * d
    cross = None
    if r == 2 * d:
        cross = _is_crosspolytope(convex_hull_union(np.parts))
    return DecompositionReport(
        blocks=tuple(minimal),
        components=tuple(comps),
        bases=tuple(bases),
        disjoint_cover=disjoint_cover,
        direct_sum=direct_sum,
        length_bound=bound,
        crosspolytope=cross,
    )


# --------------------------------------------------------------------------
# cancellation


def _reflexive_in_span(P: LatticePolytope) -> bool:
    if P.dim == 0:
        return True
    g = gorenstein_data(P)
    return g is not None and g.index == 1


def _has_relint_point(P: LatticePolytope) -> bool:
    if P.dim == 0:
        return True
    return P.count_lattice_points(1, "interior") > 0


@dataclass(frozen=True)
class CancelReport:
    sum_reflexive: bool
    sum_interior_points: int
    p_interior_point: bool
    q_interior_point: bool
    p_reflexive: bool
    q_reflexive: bool
    partition: NefPartition | None
    failures: tuple[str, ...]

    @property
    def hypotheses_hold(self) -> bool:
        return self.sum_reflexive and self.p_interior_point

    @property
    def consistent(self) -> bool:
        """The implication holds: hypotheses force both parts reflexive and a witness."""
        if not self.hypotheses_hold:
            return True
        return self.p_reflexive and self.q_reflexive and self.partition is not None


def cancel_check(P: LatticePolytope, Q: LatticePolytope) -> CancelReport:
    """Test whether ``P + Q`` reflexive and ``P`` having a relative-interior point force a nef-partition.

    ``failures`` lists the hypotheses that fail plus the conclusions that do
    not hold, as short phrases.
    """
    if P.ambient_dim != Q.ambient_dim:
        raise PreconditionError("ambient dimensions differ")
    S = minkowski_sum_all([P, Q])
    g = gorenstein_data(S) if S.is_full_dimensional else None
    sum_refl = g is not None and g.index == 1
    n_int = S.count_lattice_points(1, "interior") if S.dim > 0 else 0
    p_int, q_int = _has_relint_point(P), _has_relint_point(Q)
    p_refl, q_refl = _reflexive_in_span(P), _reflexive_in_span(Q)
    failures = []
    if not sum_refl:
        failures.append("sum not reflexive")
    if not p_int:
        failures.append("P has no interior lattice point")
    if not q_int:
        failures.append("Q has no interior lattice point")
    if not p_refl:
        failures.append("P not reflexive")
    if not q_refl:
        failures.append("Q not reflexive")
    part = detect_nef([P, Q]) if sum_refl else None
    if sum_refl and part is None:
        failures.append("no nef-partition witness")
    return CancelReport(
        sum_reflexive=sum_refl,
        sum_interior_points=n_int,
        p_interior_point=p_int,
        q_interior_point=q_int,
        p_reflexive=p_refl,
        q_reflexive=q_refl,
        partition=part,
        failures=tuple(failures),
    )
