"""Flat projections and barycenters for flags of the special linear group.

The library builds the boundary-to-flat projection maps of determinant-one
matrix groups (the chamber projections psi_w, their averaged versions and
the twisted unipotent action behind them), uses them to project boundary
flags onto maximal flats of the positive-definite symmetric space, and
combines the projections into a barycenter of a generic flag tuple.  A
half-space model of the rank-one case is included, together with closed
forms for size three that serve as oracles.
"""

from .errors import (
    BadDimension,
    DegenerateBoundary,
    DegeneratePair,
    DomainViolation,
    FlatbaryError,
    FormulaDomain,
    GenerationExhausted,
    NoConvergence,
    NotGeneric,
    NotOpposite,
    NotPositiveDefinite,
    NumericallySingular,
    PivotBreakdown,
    WrongGroupType,
)
from .matrix_kernel import (
    eliminate,
    herm_pd_power,
    lu_unit_lower,
    triangular_unitary_split,
)
from .lie_context import (
    GroupContext,
    Iwasawa,
    TolBundle,
    TorusElement,
    UnipotentElement,
    WeylElement,
    iwasawa,
    make_context,
    pi_a,
    sample_m,
    torus_power,
    twist_representatives,
    w0_is_minus_one,
    weyl_by_perm,
    weyl_elements,
)
from .flag_boundary import (
    Flag,
    FlatRep,
    GenericityResult,
    OppositenessResult,
    base_flag,
    chi,
    chi_inverse,
    flag_of,
    flat_boundary,
    flat_from_pair,
    genericity_check,
    iota,
    is_opposite,
    opposite_base_flag,
    unipotent_cell_margins,
)
from .projections import (
    SL3_GENERATORS,
    SL3_PERMUTATIONS,
    SL3_REFERENCE_KINDS,
    Sl3Coords,
    psi_general,
    psi_minus_one,
    psi_tilde,
    psi_w,
    sl3_coords,
    sl3_reference,
    sl3_unipotent,
)
from .barycenter import (
    KarcherConfig,
    SpdPoint,
    bar_q,
    bar_q_feet,
    karcher_gradient_norm,
    karcher_mean,
    phi_flat,
    phi_triple,
    project_to_flat,
    spd_distance,
    spd_of_coset,
)
from .hyperbolic import (
    INFINITY,
    HypPoint,
    Mobius,
    boundary_flag,
    halfplane_point_of_spd,
    homothety,
    hyp_bar3,
    hyp_distance,
    hyp_karcher_mean,
    hyp_project_triple,
    hyp_psi,
    hyp_w0_boundary,
    involution,
    is_infinity,
    mobius_normalize,
    spd_of_halfplane,
    translation,
)
from .sampling import (
    default_rng,
    sample_boundary_vector,
    sample_flag_tuple,
    sample_generic_coords3,
    sample_sl,
    sample_torus,
    sample_unipotent,
)
from .cli import generate_instance, run_command

__version__ = "0.1.0"

__all__ = [
    "BadDimension",
    "DegenerateBoundary",
    "DegeneratePair",
    "DomainViolation",
    "FlatbaryError",
    "FormulaDomain",
    "GenerationExhausted",
    "NoConvergence",
    "NotGeneric",
    "NotOpposite",
    "NotPositiveDefinite",
    "NumericallySingular",
    "PivotBreakdown",
    "WrongGroupType",
    "eliminate",
    "herm_pd_power",
    "lu_unit_lower",
    "triangular_unitary_split",
    "GroupContext",
    "Iwasawa",
    "TolBundle",
    "TorusElement",
    "UnipotentElement",
    "WeylElement",
    "iwasawa",
    "make_context",
    "pi_a",
    "sample_m",
    "torus_power",
    "twist_representatives",
    "w0_is_minus_one",
    "weyl_by_perm",
    "weyl_elements",
    "Flag",
    "FlatRep",
    "GenericityResult",
    "OppositenessResult",
    "base_flag",
    "chi",
    "chi_inverse",
    "flag_of",
    "flat_boundary",
    "flat_from_pair",
    "genericity_check",
    "iota",
    "is_opposite",
    "opposite_base_flag",
    "unipotent_cell_margins",
    "SL3_GENERATORS",
    "SL3_PERMUTATIONS",
    "SL3_REFERENCE_KINDS",
    "Sl3Coords",
    "psi_general",
    "psi_minus_one",
    "psi_tilde",
    "psi_w",
    "sl3_coords",
    "sl3_reference",
    "sl3_unipotent",
    "KarcherConfig",
    "SpdPoint",
    "bar_q",
    "bar_q_feet",
    "karcher_gradient_norm",
    "karcher_mean",
    "phi_flat",
    "phi_triple",
    "project_to_flat",
    "spd_distance",
    "spd_of_coset",
    "INFINITY",
    "HypPoint",
    "Mobius",
    "boundary_flag",
    "halfplane_point_of_spd",
    "homothety",
    "hyp_bar3",
    "hyp_distance",
    "hyp_karcher_mean",
    "hyp_project_triple",
    "hyp_psi",
    "hyp_w0_boundary",
    "involution",
    "is_infinity",
    "mobius_normalize",
    "spd_of_halfplane",
    "translation",
    "default_rng",
    "sample_boundary_vector",
    "sample_flag_tuple",
    "sample_generic_coords3",
    "sample_sl",
    "sample_torus",
    "sample_unipotent",
    "generate_instance",
    "run_command",
    "__version__",
]
