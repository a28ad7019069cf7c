"""h*-, g-, S̃-, B-polynomials and the stringy E-function of Gorenstein polytopes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError
from .gorenstein import DualPair, dual_gorenstein, gorenstein_data
from .poly import LaurentPoly2, UniPoly
from .polytope import (
    FaceLattice,
    LatticePolytope,
    _box_heights,
    is_lattice_pyramid,
    normalized_volume,
)


def hstar(P: LatticePolytope | None, method: str = "auto") -> UniPoly:
    """h*-polynomial; the empty polytope has h* = 1."""
    if P is None:
        return UniPoly([1])
    return UniPoly(P.hstar_coefficients(method))


def hstar_series(P: LatticePolytope) -> UniPoly:
    """h* as ``(1 - t)^(n+1) * sum_k L(k) t^k`` truncated at degree ``n``."""
    n = P.dim
    series = UniPoly(P.ehrhart_counts(n))
    return (UniPoly([1, -1]) ** (n + 1) * series).truncate(n + 1)


# --------------------------------------------------------------------------
# Eulerian posets


class GPolynomials:
    """Memoized g- and h-polynomials of the intervals of one face lattice.

    Intervals are keyed by ``(lo, hi, dual)``; ``dual=True`` means the
    interval with the order reversed.
    """

    def __init__(self, lattice: FaceLattice):
        self.L = lattice
        self._g: dict[tuple[int, int, bool], UniPoly] = {}
        self._h: dict[tuple[int, int, bool], UniPoly] = {}
        self._up: dict[int, list[int]] = {}
        self._down: dict[int, list[int]] = {}

    def _above(self, lo: int) -> list[int]:
        if lo not in self._up:
            self._up[lo] = [m for m, _ in self.L.faces if m & lo == lo]
        return self._up[lo]

    def _below(self, hi: int) -> list[int]:
        if hi not in self._down:
            self._down[hi] = [m for m, _ in self.L.faces if m & hi == m]
        return self._down[hi]

    def rank(self, lo: int, hi: int) -> int:
        return self.L.dim(hi) - self.L.dim(lo)

    def h(self, lo: int, hi: int, dual: bool = False) -> UniPoly:
        key = (lo, hi, dual)
        if key in self._h:
            return self._h[key]
        d = self.rank(lo, hi)
        if d == 0:
            res = UniPoly([1])
        else:
            tm1 = UniPoly([-1, 1])
            res = UniPoly()
            if not dual:
                # sum over lo < x <= hi of (t-1)^(rk x - 1) g[x, hi]
                for x in self._above(lo):
                    if x != lo and x & hi == x:
                        res = res + tm1 ** (self.L.dim(x) - self.L.dim(lo) - 1) * self.g(x, hi)
            else:
                # reversed order: bottom is hi, top is lo
                for x in self._below(hi):
                    if x != hi and x & lo == lo:
                        res = res + tm1 ** (self.L.dim(hi) - self.L.dim(x) - 1) * self.g(lo, x, True)
        self._h[key] = res
        return res

    def g(self, lo: int, hi: int, dual: bool = False) -> UniPoly:
        key = (lo, hi, dual)
        if key in self._g:
            return self._g[key]
        d = self.rank(lo, hi)
        if d <= 2:
            res = UniPoly([1])
        else:
            c = UniPoly([1, -1]) * self.h(lo, hi, dual)
            res = c.truncate((d + 1) // 2)
        self._g[key] = res
        return res


def g_and_h(lattice: FaceLattice, lo: int | None = None, hi: int | None = None, dual: bool = False):
    """``(g, h)`` of the interval ``[lo, hi]`` (the whole lattice by default)."""
    lo = lattice.bottom if lo is None else lo
    hi = lattice.top if hi is None else hi
    G = GPolynomials(lattice)
    return G.g(lo, hi, dual), G.h(lo, hi, dual)


def b_poly(lattice: FaceLattice, lo: int | None = None, hi: int | None = None, _G=None) -> LaurentPoly2:
    """B-polynomial of the interval ``[lo, hi]``."""
    lo = lattice.bottom if lo is None else lo
    hi = lattice.top if hi is None else hi
    G = _G or GPolynomials(lattice)
    top = lattice.rank(hi)
    out = LaurentPoly2()
    for x in lattice.interval(lo, hi):
        e = top - lattice.rank(x)
        term = LaurentPoly2.monomial(e, 0, (-1) ** e)
        term = term * G.g(x, hi, True).substitute_monomial(-1, 1)
        term = term * G.g(lo, x).substitute_monomial(1, 1)
        out = out + term
    return out


# --------------------------------------------------------------------------
# S̃


class FaceData:
    """Per-face h* and S̃ of one polytope, sharing one g-polynomial table."""

    def __init__(self, P: LatticePolytope):
        self.P = P
        self.L = P.face_lattice
        self.G = GPolynomials(self.L)
        self._hstar: dict[int, UniPoly] = {0: UniPoly([1])}
        self._stilde: dict[int, UniPoly] = {0: UniPoly([1])}
        self._faces: dict[int, LatticePolytope] = {}

    def face(self, mask: int) -> LatticePolytope:
        if mask not in self._faces:
            self._faces[mask] = self.P if mask == self.L.top else self.P.face(mask)
        return self._faces[mask]

    def hstar(self, mask: int) -> UniPoly:
        if mask not in self._hstar:
            self._hstar[mask] = hstar(self.face(mask))
        return self._hstar[mask]

    def volume(self, mask: int) -> int:
        return sum(self.hstar(mask).coeffs)

    def stilde(self, mask: int) -> UniPoly:
        if mask not in self._stilde:
            dF = self.L.dim(mask)
            out = UniPoly()
            for G in self.L.interval(0, mask):
                sign = (-1) ** (dF - self.L.dim(G))
                out = out + sign * self.hstar(G) * self.G.g(G, mask)
            self._stilde[mask] = out
        return self._stilde[mask]


def stilde(P: LatticePolytope | None) -> UniPoly:
    """S̃(P, t); the empty polytope gives 1 and a point gives 0."""
    if P is None:
        return UniPoly([1])
    return FaceData(P).stilde(P.face_lattice.top)


def stilde_simplex(P: LatticePolytope) -> UniPoly:
    """S̃ of a simplex from the interior lattice points of its parallelepiped."""
    if not P.is_simplex:
        raise PreconditionError("stilde_simplex needs a simplex")
    if P.dim == 0:
        return UniPoly()
    return UniPoly(_box_heights(P, open_=True))


# --------------------------------------------------------------------------
# E_st


def _full(P: LatticePolytope) -> LatticePolytope:
    """``P`` itself if full-dimensional, otherwise its image in its affine chart."""
    return P if P.is_full_dimensional else LatticePolytope(P.chart_vertices())


@dataclass
class StringyContext:
    pair: DualPair
    primal: FaceData
    dual: FaceData

    @classmethod
    def of(cls, P: LatticePolytope) -> "StringyContext":
        pair = dual_gorenstein(_full(P))
        return cls(pair, FaceData(pair.P), FaceData(pair.P_dual))

    @property
    def index(self) -> int:
        return self.pair.index

    @property
    def cy_dim(self) -> int:
        return self.pair.P.dim + 1 - 2 * self.index

    def faces(self):
        for mask, d in self.primal.L.faces:
            yield mask, d, self.pair.dual_face(mask)


def est(P: LatticePolytope, ctx: StringyContext | None = None) -> LaurentPoly2:
    """Stringy E-function of a Gorenstein polytope as a Laurent polynomial in ``u, v``."""
    ctx = ctx or StringyContext.of(P)
    out = LaurentPoly2()
    for mask, d, dmask in ctx.faces():
        s1 = ctx.primal.stilde(mask)
        if not s1:
            continue
        s2 = ctx.dual.stilde(dmask)
        if not s2:
            continue
        term = LaurentPoly2.monomial(d + 1, 0, (-1) ** (d + 1))
        term = term * s1.substitute_monomial(-1, 1) * s2.substitute_monomial(1, 1)
        out = out + term
    r = ctx.index
    return out.shift(-r, -r)


def cy_dim(P: LatticePolytope) -> int:
    g = gorenstein_data(P)
    if g is None:
        raise PreconditionError("polytope is not Gorenstein")
    return P.dim + 1 - 2 * g.index


@dataclass
class SpecializationReport:
    est_at_1v: dict[int, int]
    hstar_route_1v: dict[int, int]
    est_at_11: int | Fraction
    volume_route_11: int
    agree: bool


def est_specializations(P: LatticePolytope, ctx: StringyContext | None = None, E: LaurentPoly2 | None = None) -> SpecializationReport:
    """``E(1, v)`` from h*-pairs and ``E(1, 1)`` from volumes, against the full E-function."""
    ctx = ctx or StringyContext.of(P)
    E = est(P, ctx) if E is None else E
    at1 = {j: int(c) for j, c in E.at_u(1).items()}
    r = ctx.index
    route: dict[int, int] = {}
    vol = 0
    for mask, d, dmask in ctx.faces():
        sign = (-1) ** (d + 1)
        prod_ = ctx.primal.hstar(mask) * ctx.dual.hstar(dmask)
        for k, c in enumerate(prod_.coeffs):
            route[k - r] = route.get(k - r, 0) + sign * c
        vol += sign * ctx.primal.volume(mask) * ctx.dual.volume(dmask)
    route = {k: c for k, c in route.items() if c}
    e11 = E(1, 1)
    return SpecializationReport(
        est_at_1v=at1,
        hstar_route_1v=route,
        est_at_11=e11,
        volume_route_11=vol,
        agree=(at1 == route and e11 == vol),
    )


@dataclass
class DiagnosticsReport:
    cy_dim: int
    index: int
    est: LaurentPoly2
    checks: dict[str, bool | None] = field(default_factory=dict)
    k: int | None = None
    l: int | None = None

    @property
    def all_pass(self) -> bool:
        return all(v is not False for v in self.checks.values())


def _second_derivative_at_1(E: LaurentPoly2) -> Fraction:
    total = Fraction(0)
    for i, c in E.at_v(1).items():
        total += c * i * (i - 1)
    return total


def conjecture_diagnostics(P: LatticePolytope, ctx: StringyContext | None = None) -> DiagnosticsReport:
    """Run the structural checks expected of the E-function of ``P``.

    Checks that cannot be evaluated (e.g. ``E(u, 0)`` for a non-polynomial)
    are reported as ``None``.
    """
    ctx = ctx or StringyContext.of(P)
    E = est(P, ctx)
    n = ctx.cy_dim
    rep = DiagnosticsReport(cy_dim=n, index=ctx.index, est=E)
    c = rep.checks
    poly = E.is_polynomial()
    c["polynomial"] = poly
    c["nonnegative"] = all((-1) ** ((i + j) % 2) * co >= 0 for (i, j), co in E.terms.items()) if poly else None
    if n < 0:
        c["degree"] = not E
    elif n == 0:
        c["degree"] = set(E.terms) <= {(0, 0)}
    else:
        c["degree"] = E.total_degree <= 2 * n
    c["symmetry"] = E.swap() == E
    c["poincare"] = E.invert().shift(n, n) == E
    E_dual = est(ctx.pair.P_dual)
    c["reciprocity"] = LaurentPoly2.monomial(n, 0, (-1) ** (n % 2)) * E_dual.invert(True, False) == E
    if poly:
        edge = LaurentPoly2({(i, 0): co for (i, j), co in E.terms.items() if j == 0})
        c["edge"] = LaurentPoly2.monomial(n, 0, (-1) ** (n % 2)) * edge.invert(True, False) == edge
    else:
        c["edge"] = None
    e11 = E(1, 1)
    c["second_derivative"] = _second_derivative_at_1(E) == Fraction(n * (3 * n - 5), 12) * e11
    if n == 1:
        k = E.coeff(0, 0)
        rep.k = k
        c["closed_form"] = E == LaurentPoly2({(0, 0): k, (1, 0): -k, (0, 1): -k, (1, 1): k})
    elif n == 2:
        k = E.coeff(0, 0)
        b = E.coeff(1, 0)
        if b % 2 == 0:
            l = -b // 2
            rep.k, rep.l = k, l
            form = (
                LaurentPoly2({(0, 0): 1, (2, 0): 1}) * LaurentPoly2({(0, 0): 1, (0, 2): 1}) * k
                + LaurentPoly2({(1, 0): 1, (0, 1): 1}) * LaurentPoly2({(0, 0): 1, (1, 1): 1}) * (-2 * l)
                + LaurentPoly2({(1, 1): 20 * k - 16 * l})
            )
            c["closed_form"] = E == form
        else:
            c["closed_form"] = False
        c["divisible_by_24"] = e11 % 24 == 0
    return rep


# --------------------------------------------------------------------------
# weighted simplices


@dataclass(frozen=True)
class WeightSystem:
    w: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.w <= 0 or any(x <= 0 for x in self.weights):
            raise PreconditionError("weights must be positive")
        if any(self.w % x for x in self.weights):
            raise PreconditionError("every weight must divide w")

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(self.w // x for x in self.weights)


@dataclass
class WeightedSimplexReport:
    polytope: LatticePolytope
    k: tuple[int, ...]
    reciprocal_sum: Fraction
    index: int | None
    index_matches: bool
    pyramid: bool
    est_zero: bool | None
    s: int
    cy_dim: int | None
    bound_holds: bool | None


def weighted_simplex(ws: WeightSystem | Sequence[int], w: int | None = None) -> WeightedSimplexReport:
    """The simplex ``{x >= 0 : sum w_i x_i = w}`` with its Gorenstein checks."""
    if not isinstance(ws, WeightSystem):
        ws = WeightSystem(int(w), tuple(int(x) for x in ws))
    k = ws.k
    D = len(k)
    P = LatticePolytope([tuple(ki if j == i else 0 for j in range(D)) for i, ki in enumerate(k)])
    recip = sum(Fraction(1, ki) for ki in k)
    g = gorenstein_data(P)
    index = g.index if g else None
    matches = (recip.denominator == 1) == (g is not None) and (g is None or index == recip)
    pyr = any(ki == 1 for ki in k)
    est_zero = None
    if pyr:
        if is_lattice_pyramid(P) is None:
            raise AssertionError("weight 1 should give a lattice pyramid")
        if g is not None:
            est_zero = not est(P)
    s = sum(1 for ki in k if ki >= 3)
    n = P.dim + 1 - 2 * index if index else None
    bound = (s <= 3 * n) if (n is not None and not pyr) else None
    return WeightedSimplexReport(
        polytope=P,
        k=k,
        reciprocal_sum=recip,
        index=index,
        index_matches=matches,
        pyramid=pyr,
        est_zero=est_zero,
        s=s,
        cy_dim=n,
        bound_holds=bound,
    )


def volume(P: LatticePolytope | None) -> int:
    return normalized_volume(P)
