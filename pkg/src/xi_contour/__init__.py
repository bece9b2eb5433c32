"""Completed zeta function from a deformed contour-integral representation.

The contour evaluator (``completed_zeta_contour``) is checked against a
direct evaluation (``completed_zeta_direct``) built from a Lanczos gamma and
a Borwein eta series; ``experiments`` and ``acceptance`` hold the numerical
checks, ``cli`` the ``xi-contour`` command.
"""

from .contour_geometry import (
    Arc,
    ContourPath,
    Line,
    RadiiConfig,
    build_contour,
    build_left_contour,
    build_right_contour,
    make_radii,
    parameterize_segment,
    segment_labels,
)
from .errors import (
    AuditFailure,
    ConvergenceError,
    DomainError,
    FitError,
    OrderingError,
    PoleError,
    RealnessViolation,
    XiContourError,
)
from .experiments import (
    CancellationReport,
    RayDecayFit,
    ScalingFit,
    SegmentMagnitude,
    ZeroRecord,
    arc_scaling_fit,
    cancellation_report,
    contour_invariance_check,
    find_critical_zeros,
    loglog_fit,
    ray_decay_fit,
    segment_magnitude_table,
    wedge_scaling_fit,
)
from .integrand import integrand_left, integrand_right, principal_power, sin_denominator
from .quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    SegmentIntegral,
    integrate_segment,
    truncation_radius,
)
from .special_functions import (
    completed_zeta_direct,
    eta_borwein,
    gamma,
    xi_prefactor,
    zeta_reference,
)
from .zeta_contour import (
    AUDITED_CONVENTION,
    DEFAULT_RADII,
    AuditReport,
    ContourEvaluation,
    Convention,
    completed_zeta_contour,
    default_radii,
    formula_audit,
    zeta_hat_left,
    zeta_hat_right,
)

__version__ = "0.1.0"
