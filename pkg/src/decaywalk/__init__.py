"""Memory walk with polynomially decaying steps.

A library and CLI for the elephant random walk whose step at time k has
size k^-gamma: exact moment and distribution engines, pathwise Doob
decomposition diagnostics, a phase-diagram classifier, and a Monte Carlo
harness that checks the model's limit theorems at desk scale.
"""

from .params import (
    ModelParams,
    NonPositiveGammaError,
    OutOfRangeError,
    ParameterError,
    validate_params,
)
from .walk import (
    WalkState,
    advance,
    conditional_step_mean,
    plus_probability,
    simulate_path,
    simulate_path_resampling,
)
from .enumeration import (
    HorizonTooLargeError,
    PathDistribution,
    enumerate_paths,
    enumerate_resampling_paths,
)
from .exact import (
    MomentTable,
    NotConvergentRegimeError,
    TnDistribution,
    asymptotic_m2_T,
    correlation_T,
    cross_moment_XT,
    exact_T_distribution,
    gamma_factors,
    limit_mean_S,
    mean_S,
    mean_T,
    moment_table,
    second_moment_S,
    second_moment_T,
    variance_S,
)
from .decomposition import (
    BoundViolationError,
    DecompState,
    DoobTracker,
    VariationTriple,
    decompose_step,
    drift_A,
    expected_variation,
    remainder_R,
    remainder_bound,
    residual_22,
    sigma1_upper,
    variations,
)
from .regime import (
    RegimeKind,
    RegimeLabel,
    ScalingLaw,
    classify,
    excluded_superdiffusive_gamma,
    gamma_0,
    gamma_0_quadratic,
    gamma_c,
    phase_grid,
)
from .rng import TrialStream
from .ensemble import (
    EnsembleArrays,
    EnsembleResult,
    EnsembleStats,
    Histogram,
    ResourceLimitError,
    SeedSpec,
    geometric_checkpoints,
    run_ensemble,
    set_threads,
    simulate_ensemble,
)
from .experiments import (
    CltMoments,
    DriftCoupling,
    OscillationCensus,
    ScalingFit,
    clt_moments,
    drift_coupling,
    oscillation_census,
    variance_scaling_fit,
)

__version__ = "0.1.0"
