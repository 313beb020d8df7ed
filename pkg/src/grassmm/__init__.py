"""Grassmann-block majorization-minimization: geometry, engine, deconvolution, CLI."""

from .config import DEFAULT_TOLERANCES, Tolerances
from .deconv import (
    DeconvProblem,
    DeconvState,
    SyntheticInstance,
    circular_convolution,
    circular_correlation,
    deconv_cost,
    default_init,
    final_state,
    generate_instance,
    grad_a,
    grad_x,
    heuristic_lambda,
    lasso_warm_start,
    lipschitz_bound,
    prox_step_x,
    random_init,
    recovery_score,
    riemannian_step_a,
    soft_threshold,
    solve_deconv,
)
from .engine import (
    AuditResult,
    BlockProblem,
    ConvergenceReport,
    InfeasibleBlockError,
    IterationRecord,
    IterationTrace,
    MonotonicityViolation,
    SolverConfig,
    SurrogateOracle,
    audit_derivative_match,
    audit_homogeneity,
    audit_majorization,
    audit_quasiconvexity,
    audit_tightness,
    builtin_subspace_plus_mean,
    run_block_mm,
    stationarity_check,
    subspace_plus_mean_init,
)
from .grassmann import (
    AlignedPair,
    GeodesicNotUnique,
    GeodesicSpec,
    GrassmannPoint,
    PrincipalAngles,
    TangentVector,
    align,
    aligned_geodesic_at,
    build_aligned_spec,
    canonical_distance,
    exp_map,
    log_map,
    make_point,
    principal_angles,
    random_point,
    riemannian_gradient,
    tangent_project,
)
from .linalg import (
    NumericError,
    QRFactors,
    ThinSVD,
    as_matrix,
    qr_orthonormalize,
    random_orthonormal,
    thin_svd,
)

__all__ = [name for name in dir() if not name.startswith("_")]
