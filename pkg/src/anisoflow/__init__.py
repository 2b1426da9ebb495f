"""Anisotropic-length-preserving curve flow: simulator and checks.

Convex plane curves are represented by their support function on a uniform
angle grid.  The flow moves each point along the normal with speed
ptilde * (K - lam/(2*Atilde)), which keeps the total interfacial energy
constant, grows the enclosed area, and drives the curve to a homothety of
the Wulff shape of the anisotropy ptilde.  Every monotonicity statement,
bound and inequality the limit theory provides is exposed as a runtime
check.
"""

from .anisotropy import (
    AnisotropyProfile,
    build_profile,
    grid_angles,
    wulff_area,
    wulff_boundary,
)
from .curve import (
    CurveState,
    anisotropic_curvature,
    anisotropic_length,
    anisotropic_total_curvature,
    area,
    center,
    curvature,
    curvature_density,
    length,
    polygon_area,
    reconstruct_points,
    spectral_derivative,
    state_from_coeffs,
    steiner_point,
)
from .diagnostics import (
    DiagnosticsRecord,
    EnvelopeReport,
    InequalityMargins,
    bonnesen_wulff_margin,
    classical_bonnesen_radii,
    convergence_metrics,
    decay_envelope_check,
    deficit,
    hausdorff_distance,
    identity_margin,
    make_record,
    wulff_radii,
)
from .errors import (
    AnisoflowError,
    AsymmetricAnisotropy,
    ConvexityLost,
    EnvelopeViolated,
    IoError,
    NegativeDiscriminant,
    NonConvexAnisotropy,
    NonFiniteState,
    NonPositiveSupport,
    ParseError,
    ValidationError,
)
from .flow import (
    FlowConfig,
    Trajectory,
    lambda_forcing,
    rhs,
    run,
    stable_dt,
    step,
)
from .io import RunSpec, parse_config, write_snapshot, write_timeseries
from .trig import TrigPolynomial

__version__ = "0.1.0"

__all__ = [
    "AnisotropyProfile", "build_profile", "grid_angles", "wulff_area",
    "wulff_boundary",
    "CurveState", "anisotropic_curvature", "anisotropic_length",
    "anisotropic_total_curvature", "area", "center", "curvature",
    "curvature_density", "length", "polygon_area", "reconstruct_points",
    "spectral_derivative", "state_from_coeffs", "steiner_point",
    "DiagnosticsRecord", "EnvelopeReport", "InequalityMargins",
    "bonnesen_wulff_margin", "classical_bonnesen_radii",
    "convergence_metrics", "decay_envelope_check", "deficit",
    "hausdorff_distance", "identity_margin", "make_record", "wulff_radii",
    "AnisoflowError", "AsymmetricAnisotropy", "ConvexityLost",
    "EnvelopeViolated", "IoError", "NegativeDiscriminant",
    "NonConvexAnisotropy", "NonFiniteState", "NonPositiveSupport",
    "ParseError", "ValidationError",
    "FlowConfig", "Trajectory", "lambda_forcing", "rhs", "run",
    "stable_dt", "step",
    "RunSpec", "parse_config", "write_snapshot", "write_timeseries",
    "TrigPolynomial",
    "__version__",
]
