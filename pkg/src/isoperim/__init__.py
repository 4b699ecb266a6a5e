"""Isoperimetric profiles, constant-curvature minimizers and Cheeger sets
of planar Jordan domains, computed on a signed-distance grid."""

from .backend import backend_name, use as use_backend
from .domain import (
    JordanDomain,
    load_domain,
    parse_domain,
    polygon_area,
    polygon_perimeter,
)
from .errors import (
    BudgetError,
    EmptyRegionError,
    InvalidDomainError,
    NeckViolationError,
)
from .field import (
    Grid,
    RegionMask,
    ScalarField,
    auto_spacing,
    build_distance_field,
    connected_components,
    dilate_by_disk,
    extract_contours,
    inner_parallel_mask,
    inradius,
    mask_distance,
    mask_measure,
    polyline_length,
    read_isof,
    write_isof,
)
from .profile import (
    CheegerReport,
    ConvexityReport,
    Profile,
    ProfileSegment,
    build_cheeger_report,
    check_convexity,
    cheeger_via_inner_formula,
    cheeger_via_profile,
    compute_sweep,
    interior_ball_report,
    kappa_of_volume,
    profile_from_legendre,
    resolve_minimizer,
    write_profile_csv,
)
from .solver import (
    ArcCheckReport,
    ArcInfo,
    MinimizerReport,
    SweepSample,
    check_nestedness,
    curvature_energy,
    has_tendrils,
    inball_sample,
    maximal_minimizer,
    minimal_minimizer,
    minimizer_volume_gap,
    sweep_sample,
    verify_arc_property,
    volume_matched_minimizer,
)

__version__ = "0.1.0"
