"""Exact toolkit for Gorenstein polytopes, Cayley structures, nef-partitions and stringy E-functions."""

from .errors import EnumerationCapError, GorkitError, ParseError, PreconditionError
from .lattice import (
    QuotientMap,
    complete_to_unimodular,
    hnf,
    kernel_basis,
    quotient_projection,
    saturation,
    snf,
)
from .poly import LaurentPoly2, UniPoly
from .polytope import (
    FaceLattice,
    LatticePolytope,
    RationalPolytope,
    build_polytope,
    convex_hull_union,
    dual_polytope,
    enumeration_cap,
    face_lattice,
    get_enumeration_cap,
    is_lattice_pyramid,
    lattice_points,
    minkowski_sum,
    minkowski_sum_all,
    normalized_volume,
)
from .gorenstein import (
    DualPair,
    GorensteinCone,
    GorensteinData,
    cone_over,
    dual_gorenstein,
    gorenstein_data,
    is_gorenstein,
    refined_lattice_check,
)
from .cayley import (
    CayleyStructure,
    SpecialSimplex,
    cayley_gorenstein_check,
    cayley_polytope,
    cayley_structures,
    direct_sum,
    has_special_simplex,
    integrally_closed,
    polar_lift,
    project_along_special,
    special_simplices,
)
from .nef import (
    NefPartition,
    cancel_check,
    center_and_properize,
    collect,
    cones_meet_trivially,
    decompose_irreducible,
    detect_nef,
    dual_nef,
    lattice_point_count_identity,
    nef_vertex_formula,
    project_nef,
)
from .stringy import (
    WeightSystem,
    b_poly,
    conjecture_diagnostics,
    cy_dim,
    est,
    est_specializations,
    g_and_h,
    hstar,
    hstar_series,
    stilde,
    stilde_simplex,
    weighted_simplex,
)

__version__ = "0.1.0"
