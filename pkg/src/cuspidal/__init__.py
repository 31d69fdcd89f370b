"""Cusps of deformed complex polynomials, counted by topological degree."""
from .analysis import (
    CuspReport,
    LocalCount,
    Singularity,
    Tolerances,
    Verdict,
    analyze,
    auto_ab,
    auto_t,
    check_excellent,
    count_cusps,
    example1_positions,
    genericity_scan,
    singularities,
    verify_corollary1,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
)
from .degree import Contour, RootClass, classify_root, delta_of, winding_number
from .errors import (
    BoundaryZero,
    CuspidalError,
    Diverged,
    EqualModuli,
    IndeterminateCluster,
    InputError,
    ModulusTooSmall,
    MultiplicityTooSmall,
    NonConvergent,
    NotARoot,
    NumericError,
    ParseError,
)
from .jets import (
    Deformation,
    General,
    Linear,
    SecondDeformation,
    capital_phi,
    critical_polys,
    cusp_poly,
    cusp_poly_linear_closed_form,
    genericity_polys,
    jacobian,
    jacobian_linear_closed_form,
    multiplicity_at_origin,
    realize,
    regularity_poly,
    regularity_poly_linear_closed_form,
)
from .locator import CertifiedRoot, SearchRegion, isolate_roots, refine_root
from .mixedpoly import Z, ZBAR, MixedPolynomial, to_text

__version__ = "0.1.0"
