"""Lattice polytopes with exact V/H descriptions.

A :class:`LatticePolytope` is built from any finite point set. Its facets are
stored as pairs ``(u, a)`` meaning ``<u, z> >= -a`` where ``z`` are the
coordinates of a point in the polytope's affine chart. For full-dimensional
polytopes the chart is the identity, so facets are ordinary ambient
inequalities. Lower-dimensional polytopes get an affine lattice chart of
``aff(P) ∩ Z^d`` anchored at the lexicographically smallest vertex, so every
lattice notion (normalized volume, lattice distance, interior points) is taken
relative to the affine hull.
"""

from __future__ import annotations

import itertools
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, floor, ceil, gcd, prod
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ._dd import extreme_rays
from .errors import EnumerationCapError, PreconditionError
from .lattice import identity, rank, saturation, snf

DEFAULT_CAP = 10**7
_cap: ContextVar[int] = ContextVar("gorkit_enumeration_cap", default=DEFAULT_CAP)


def get_enumeration_cap() -> int:
    return _cap.get()


@contextmanager
def enumeration_cap(limit: int):
    """Temporarily change the maximal number of candidate points examined."""
    token = _cap.set(int(limit))
    try:
        yield
    finally:
        _cap.reset(token)


def _check_cap(n: int, what: str = "candidate points") -> None:
    limit = _cap.get()
    if n > limit:
        raise EnumerationCapError(f"enumeration cap exceeded: {n} {what} > {limit}")


# --------------------------------------------------------------------------
# affine charts


@dataclass(frozen=True)
class AffineChart:
    """``x = origin + z @ basis`` with ``basis`` a saturated lattice basis in HNF."""

    origin: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _pivots(self) -> tuple[int, ...]:
        return tuple(next(c for c, x in enumerate(row) if x) for row in self.basis)

    def from_chart(self, z: Sequence, scale: int = 1) -> tuple:
        """Ambient point for chart coordinates ``z`` of the ``scale``-th dilate."""
        x = [scale * o for o in self.origin]
        for zi, row in zip(z, self.basis):
            if zi:
                for j, b in enumerate(row):
                    x[j] += zi * b
        return tuple(x)

    def to_chart(self, x: Sequence, scale: int = 1) -> tuple:
        """Chart coordinates of ``x`` (relative to the ``scale``-th dilate).

        Raises ``ValueError`` if ``x`` is not on the affine hull.
        """
        y = [xi - scale * o for xi, o in zip(x, self.origin)]
        z = []
        for i, (row, c) in enumerate(zip(self.basis, self._pivots)):
            val = y[c] - sum(z[j] * self.basis[j][c] for j in range(i))
            q = Fraction(val) / row[c]
            z.append(int(q) if q.denominator == 1 else q)
        if any(x != y for x, y in zip(self.from_chart(z, scale=0), y)):
            raise ValueError("point is not on the affine hull")
        return tuple(z)


def _full_chart(d: int) -> AffineChart:
    return AffineChart(origin=(0,) * d, basis=identity(d))


# --------------------------------------------------------------------------
# lattice point scanning


def _scan(normals, off_closed, off_open, lo, hi, mode: str, count_only: bool):
    """Box scan in chart coordinates.

    A point ``z`` is in the polytope when ``<u_i, z> + off_closed_i >= 0`` for
    all facets and in the relative interior when ``<u_i, z> + off_open_i >= 0``.
    """
    k = len(lo)
    sizes = [h - l + 1 for l, h in zip(lo, hi)]
    if any(s <= 0 for s in sizes):
        return 0 if count_only else []
    total = prod(sizes)
    _check_cap(total)
    if not normals:
        # dim-0 chart: the single point is both closed and relatively open
        if mode == "boundary":
            return 0 if count_only else []
        return 1 if count_only else [()]

    offs = off_open if mode == "interior" else off_closed
    bound = max(
        sum(abs(u) * max(abs(l), abs(h)) for u, l, h in zip(nrm, lo, hi)) + max(abs(a), abs(b))
        for nrm, a, b in zip(normals, off_closed, off_open)
    )
    if bound < 2**62 and total > 64:
        U = np.array(normals, dtype=np.int64).T
        A = np.array(offs, dtype=np.int64)
        Aopen = np.array(off_open, dtype=np.int64)
        lo_arr = np.array(lo, dtype=np.int64)
        chunk = 1 << 18
        found = 0
        out = []
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            Z = np.stack(np.unravel_index(idx, sizes), axis=1).astype(np.int64) + lo_arr
            V = Z @ U
            keep = np.all(V + A >= 0, axis=1)
            if mode == "boundary":
                keep &= ~np.all(V + Aopen >= 0, axis=1)
            if count_only:
                found += int(keep.sum())
            else:
                out.extend(tuple(int(x) for x in row) for row in Z[keep])
        return found if count_only else out

    found = 0
    out = []
    for z in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        vals = [sum(u * x for u, x in zip(nrm, z)) for nrm in normals]
        if any(v + a < 0 for v, a in zip(vals, offs)):
            continue
        if mode == "boundary" and all(v + a >= 0 for v, a in zip(vals, off_open)):
            continue
        if count_only:
            found += 1
        else:
            out.append(z)
    return found if count_only else out


def _check_mode(mode: str) -> None:
    if mode not in ("all", "interior", "boundary"):
        raise ValueError(f"unknown mode {mode!r}")


# --------------------------------------------------------------------------
# face lattice


class FaceLattice:
    """Graded poset of faces of a polytope, from ``∅`` (dim -1) to ``P``.

    Faces are identified by bitmasks over the polytope's vertex list. The
    rank of a face is ``dim + 1``.
    """

    def __init__(self, faces: Iterable[tuple[int, int]], n_vertices: int):
        self.faces: tuple[tuple[int, int], ...] = tuple(sorted(faces, key=lambda f: (f[1], f[0])))
        self.n_vertices = n_vertices
        self._dim = dict(self.faces)
        self.bottom = 0
        self.top = (1 << n_vertices) - 1

    def __len__(self) -> int:
        return len(self.faces)

    def __contains__(self, mask: int) -> bool:
        return mask in self._dim

    def dim(self, mask: int) -> int:
        return self._dim[mask]

    def rank(self, mask: int) -> int:
        return self._dim[mask] + 1

    @staticmethod
    def leq(a: int, b: int) -> bool:
        return a & b == a

    def interval(self, lo: int, hi: int) -> list[int]:
        """Faces ``G`` with ``lo <= G <= hi``, sorted by dimension."""
        return [m for m, _ in self.faces if m & lo == lo and m & hi == m]

    def is_eulerian(self) -> bool:
        for lo, dlo in self.faces:
            for hi, dhi in self.faces:
                if dhi > dlo and hi & lo == lo:
                    s = sum((-1) ** self._dim[m] for m in self.interval(lo, hi))
                    if s != 0:
                        return False
        return True


def _closure(facet_masks: Sequence[int], n_vertices: int) -> set[int]:
    full = (1 << n_vertices) - 1
    faces = {full, 0}
    frontier = [full]
    while frontier:
        new = []
        for F in frontier:
            for G in facet_masks:
                H = F & G
                if H not in faces:
                    faces.add(H)
                    new.append(H)
        frontier = new
    return faces


# --------------------------------------------------------------------------
# polytopes


class Pyramid(NamedTuple):
    apex: tuple[int, ...]
    base: int  # facet index


class LatticePolytope:
    """Convex hull of finitely many integer points.

    >>> P = LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    >>> P.dim, len(P.vertices), len(P.facets)
    (2, 4, 4)
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise PreconditionError("a polytope needs at least one point")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise PreconditionError("points have different lengths")
        self.ambient_dim = d
        o = pts[0]
        B = saturation([tuple(a - b for a, b in zip(p, o)) for p in pts[1:]], d)
        k = len(B)
        self.dim = k
        chart = _full_chart(d) if k == d else AffineChart(origin=o, basis=B)
        self.chart = chart
        if k == 0:
            self.vertices = (pts[0],)
            self.facets: tuple[tuple[tuple[int, ...], int], ...] = ()
            self.facet_masks: tuple[int, ...] = ()
            self._zverts = ((),)
            return
        zs = [chart.to_chart(p) for p in pts]
        rays = extreme_rays([z + (1,) for z in zs])
        facets = [(r[:k], r[k]) for r, _ in rays]
        tight = [0] * len(pts)
        for fi, (_, mask) in enumerate(rays):
            for j in range(len(pts)):
                if mask >> j & 1:
                    tight[j] |= 1 << fi
        keep = [
            j
            for j in range(len(pts))
            if not any(i != j and tight[i] & tight[j] == tight[j] for i in range(len(pts)))
        ]
        self.vertices = tuple(pts[j] for j in keep)
        self._zverts = tuple(zs[j] for j in keep)
        self.facets = tuple(facets)
        masks = []
        for u, a in facets:
            m = 0
            for vi, z in enumerate(self._zverts):
                if sum(x * y for x, y in zip(u, z)) + a == 0:
                    m |= 1 << vi
            masks.append(m)
        self.facet_masks = tuple(masks)

    # ---- basic protocol

    def __repr__(self) -> str:
        return f"LatticePolytope(dim={self.dim}, vertices={list(self.vertices)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def is_simplex(self) -> bool:
        return self.n_vertices == self.dim + 1

    def vertex_mask(self, vertices: Iterable[Sequence[int]]) -> int:
        idx = {v: i for i, v in enumerate(self.vertices)}
        m = 0
        for v in vertices:
            m |= 1 << idx[tuple(v)]
        return m

    def vertices_of(self, mask: int) -> tuple[tuple[int, ...], ...]:
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def chart_vertices(self) -> tuple[tuple[int, ...], ...]:
        return self._zverts

    # ---- geometry

    def facet_values(self, x: Sequence) -> tuple:
        """``<u_F, z> + a_F`` for each facet, where ``z`` are chart coordinates of ``x``."""
        z = self.chart.to_chart(x)
        return tuple(sum(p * q for p, q in zip(u, z)) + a for u, a in self.facets)

    def contains(self, x: Sequence) -> bool:
        try:
            vals = self.facet_values(x)
        except ValueError:
            return False
        return all(v >= 0 for v in vals)

    def relative_interior_contains(self, x: Sequence) -> bool:
        try:
            vals = self.facet_values(x)
        except ValueError:
            return False
        return all(v > 0 for v in vals)

    def dilate(self, k: int) -> "LatticePolytope":
        return LatticePolytope([tuple(k * x for x in v) for v in self.vertices])

    def translate(self, t: Sequence[int]) -> "LatticePolytope":
        return LatticePolytope([tuple(x + y for x, y in zip(v, t)) for v in self.vertices])

    def face(self, mask: int) -> "LatticePolytope":
        if not mask:
            raise PreconditionError("the empty face is not a lattice polytope")
        return LatticePolytope(self.vertices_of(mask))

    def is_reflexive(self) -> bool:
        """Full-dimensional with every facet at lattice distance 1 from the origin."""
        return self.is_full_dimensional and self.dim > 0 and all(a == 1 for _, a in self.facets)

    @cached_property
    def face_lattice(self) -> FaceLattice:
        faces = _closure(self.facet_masks, self.n_vertices)
        out = []
        for m in faces:
            if m == 0:
                out.append((0, -1))
                continue
            normals = [u for (u, _), fm in zip(self.facets, self.facet_masks) if fm & m == m]
            out.append((m, self.dim - (rank(normals) if normals else 0)))
        return FaceLattice(out, self.n_vertices)

    # ---- lattice points

    def _box(self, k: int):
        zs = self._zverts
        lo = [k * min(z[i] for z in zs) for i in range(self.dim)]
        hi = [k * max(z[i] for z in zs) for i in range(self.dim)]
        return lo, hi

    def _scan_dilate(self, k: int, mode: str, count_only: bool):
        _check_mode(mode)
        if k == 0:
            if mode == "boundary" and self.dim > 0:
                return 0 if count_only else []
            # 0P is a single point; only its closure/relint matter
            if mode == "interior" and self.dim > 0:
                return 0 if count_only else []
            return 1 if count_only else [(0,) * self.ambient_dim]
        normals = [u for u, _ in self.facets]
        lo, hi = self._box(k)
        res = _scan(
            normals,
            [k * a for _, a in self.facets],
            [k * a - 1 for _, a in self.facets],
            lo,
            hi,
            mode,
            count_only,
        )
        if count_only:
            return res
        return sorted(self.chart.from_chart(z, scale=k) for z in res)

    def lattice_points(self, mode: str = "all") -> list[tuple[int, ...]]:
        return self._scan_dilate(1, mode, False)

    def count_lattice_points(self, k: int = 1, mode: str = "all") -> int:
        """Number of lattice points of the ``k``-th dilate."""
        return self._scan_dilate(k, mode, True)

    def dilate_lattice_points(self, k: int, mode: str = "all") -> list[tuple[int, ...]]:
        return self._scan_dilate(k, mode, False)

    # ---- Ehrhart data

    def ehrhart_counts(self, upto: int) -> list[int]:
        return [self.count_lattice_points(k) for k in range(upto + 1)]

    def hstar_coefficients(self, method: str = "auto") -> list[int]:
        """Coefficients of the h*-polynomial, constant term first."""
        if method == "auto":
            method = "box" if self.is_simplex and self.dim > 0 else "counts"
        if method == "box":
            if not self.is_simplex:
                raise PreconditionError("the parallelepiped method needs a simplex")
            return _trim(_box_heights(self, open_=False))
        n = self.dim
        L = self.ehrhart_counts(n)
        h = [
            sum((-1) ** (j - i) * comb(n + 1, j - i) * L[i] for i in range(j + 1))
            for j in range(n + 1)
        ]
        return _trim(h)


def _trim(c: list[int]) -> list[int]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _box_heights(P: LatticePolytope, open_: bool) -> list[int]:
    """Lattice points of the (half-)open parallelepiped over a simplex, by height.

    The generators are ``(z_i, 1)`` for the chart coordinates ``z_i`` of the
    vertices. With ``S = U M V`` the Smith form of the generator matrix ``M``
    (generators as columns), coset representatives of ``Z^(n+1) / M Z^(n+1)``
    are ``U^{-1} c`` with ``0 <= c_i < s_i`` and their parallelepiped
    coordinates are ``frac(V S^{-1} c)``.
    """
    n = P.dim
    cols = [z + (1,) for z in P.chart_vertices()]
    M = tuple(tuple(col[i] for col in cols) for i in range(n + 1))
    S, _, V = snf(M)
    s = [S[i][i] for i in range(n + 1)]
    _check_cap(prod(s), "parallelepiped points")
    heights = [0] * (n + 1)
    for c in itertools.product(*(range(x) for x in s)):
        q = [Fraction(ci, si) for ci, si in zip(c, s)]
        lam = [sum(V[i][j] * q[j] for j in range(n + 1)) for i in range(n + 1)]
        lam = [x - floor(x) for x in lam]
        if open_ and any(x == 0 for x in lam):
            continue
        h = sum(lam)
        heights[int(h)] += 1
    return heights


def build_polytope(points: Iterable[Sequence[int]]) -> LatticePolytope:
    return LatticePolytope(points)


# --------------------------------------------------------------------------
# rational polytopes (duals)


class RationalPolytope:
    """Full-dimensional polytope with rational vertices.

    Facets are ``(u, a)`` with ``u`` primitive integral and ``a`` rational,
    meaning ``<u, y> >= -a``.
    """

    def __init__(self, vertices, facets, facet_masks):
        self.vertices: tuple[tuple[Fraction, ...], ...] = tuple(vertices)
        self.facets = tuple(facets)
        self.facet_masks = tuple(facet_masks)
        self.ambient_dim = len(self.vertices[0])
        self.dim = self.ambient_dim

    def __repr__(self) -> str:
        return f"RationalPolytope(vertices={[tuple(str(x) for x in v) for v in self.vertices]})"

    @property
    def is_lattice(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def to_lattice(self) -> LatticePolytope:
        if not self.is_lattice:
            raise PreconditionError("polytope has non-integral vertices")
        return LatticePolytope([tuple(int(x) for x in v) for v in self.vertices])

    def contains(self, y: Sequence) -> bool:
        return all(sum(p * q for p, q in zip(u, y)) + a >= 0 for u, a in self.facets)

    def lattice_points(self, mode: str = "all") -> list[tuple[int, ...]]:
        _check_mode(mode)
        d = self.ambient_dim
        lo = [ceil(min(v[i] for v in self.vertices)) for i in range(d)]
        hi = [floor(max(v[i] for v in self.vertices)) for i in range(d)]
        res = _scan(
            [u for u, _ in self.facets],
            [floor(a) for _, a in self.facets],
            [ceil(a) - 1 for _, a in self.facets],
            lo,
            hi,
            mode,
            False,
        )
        return sorted(res)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def dual_polytope(P: LatticePolytope, m: Sequence | None = None) -> RationalPolytope:
    """Polar dual ``(P - m)* = {y : <y, x - m> >= -1 for all x in P}``."""
    d = P.ambient_dim
    if m is None:
        m = (0,) * d
    m = tuple(Fraction(x) for x in m)
    if not P.is_full_dimensional or not P.relative_interior_contains(m):
        raise PreconditionError("not an interior point")
    verts = []
    for u, a in P.facets:
        h = sum(x * y for x, y in zip(u, m)) + a
        verts.append(tuple(Fraction(x) / h for x in u))
    facets = []
    for v in P.vertices:
        w = [Fraction(x) - y for x, y in zip(v, m)]
        den = 1
        for x in w:
            den = _lcm(den, x.denominator)
        wi = tuple(int(x * den) for x in w)
        g = 0
        for x in wi:
            g = gcd(g, x)
        facets.append((tuple(x // g for x in wi), Fraction(den, g)))
    # vertex i of the dual (facet i of P) lies on dual facet j (vertex j of P)
    masks = []
    for j in range(P.n_vertices):
        mask = 0
        for i, fm in enumerate(P.facet_masks):
            if fm >> j & 1:
                mask |= 1 << i
        masks.append(mask)
    order = sorted(range(len(verts)), key=lambda i: verts[i])
    pos = {old: new for new, old in enumerate(order)}
    verts = [verts[i] for i in order]
    masks = [sum(1 << pos[i] for i in range(len(order)) if mk >> i & 1) for mk in masks]
    return RationalPolytope(verts, facets, masks)


# --------------------------------------------------------------------------
# constructions


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.ambient_dim != Q.ambient_dim:
        raise PreconditionError("ambient dimensions differ")
    return LatticePolytope(
        {tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices}
    )


def minkowski_sum_all(parts: Sequence[LatticePolytope]) -> LatticePolytope:
    out = parts[0]
    for Q in parts[1:]:
        out = minkowski_sum(out, Q)
    return out


def convex_hull_union(parts: Sequence[LatticePolytope]) -> LatticePolytope:
    if len({P.ambient_dim for P in parts}) != 1:
        raise PreconditionError("ambient dimensions differ")
    return LatticePolytope([v for P in parts for v in P.vertices])


def lattice_points(P, mode: str = "all") -> list[tuple[int, ...]]:
    return P.lattice_points(mode)


def face_lattice(P: LatticePolytope) -> FaceLattice:
    return P.face_lattice


def normalized_volume(P: LatticePolytope | None) -> int:
    """Lattice-normalized volume relative to ``aff(P)``; the empty set has volume 1."""
    if P is None:
        return 1
    return sum(P.hstar_coefficients())


def is_lattice_pyramid(P: LatticePolytope) -> Pyramid | None:
    """Lexicographically first ``(apex, facet)`` exhibiting ``P`` as a lattice pyramid."""
    if P.dim == 0:
        return None
    full = (1 << P.n_vertices) - 1
    for vi, z in enumerate(P.chart_vertices()):
        rest = full & ~(1 << vi)
        for fi, ((u, a), fm) in enumerate(zip(P.facets, P.facet_masks)):
            if fm == rest and sum(x * y for x, y in zip(u, z)) + a == 1:
                return Pyramid(P.vertices[vi], fi)
    return None


__all__ = [
    "AffineChart",
    "DEFAULT_CAP",
    "FaceLattice",
    "LatticePolytope",
    "Pyramid",
    "RationalPolytope",
    "build_polytope",
    "convex_hull_union",
    "dual_polytope",
    "enumeration_cap",
    "face_lattice",
    "get_enumeration_cap",
    "is_lattice_pyramid",
    "lattice_points",
    "minkowski_sum",
    "minkowski_sum_all",
    "normalized_volume",
]
