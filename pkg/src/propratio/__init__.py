"""Estimation of a finite-population proportion using an auxiliary variable.

Point estimators (ratio, smooth-family, ratio-exponential, regression
comparator), their first-order bias/MSE theory with optimal constants and
percent relative efficiencies, and a sampling engine that verifies the
formulas by exact enumeration of all C(N, n) SRSWOR samples and by seeded
Monte Carlo.  Hot loops run in a compiled kernel with a pure-Python
fallback (see propratio.kernels).
"""

from . import errors
from .estimators import (
    FamilyKind,
    RatioExpParams,
    SmoothFamily,
    ratio_estimate,
    ratio_exp_estimate,
    regression_estimate,
    smooth_estimate,
    usual_estimate,
)
from .io import SummaryInput, load_population_csv, load_summary_json, write_population_csv
from .kernels import available_backends, default_backend
from .moments import (
    DesignMoments,
    MseQuadratic,
    OptimalWeights,
    RatioExpCoefficients,
    beats_regression,
    beats_usual,
    min_ratio_exp_mse,
    min_smooth_mse,
    mse_at_weights,
    mse_quadratic,
    optimal_regression_slope,
    optimal_slope,
    optimal_weights,
    pre,
    ratio_bias,
    ratio_exp_bias,
    ratio_exp_coefficients,
    ratio_mse,
    smooth_bias,
    smooth_mse,
    var_usual,
)
from .population import (
    Population,
    PopulationSummary,
    PopulationUnit,
    SampleDeviation,
    SampleSummary,
    fpc,
    sample_deviation,
    summarize_population,
    summarize_sample,
)
from .sampling import (
    DeviationMoments,
    EmpiricalReport,
    EstimatorKind,
    EstimatorSpec,
    EstimatorStats,
    ExactReport,
    SyntheticSpec,
    draw_srswor,
    enumerate_exact,
    exact_deviation_moments,
    generate_population,
    monte_carlo,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "__version__",
    # population
    "Population",
    "PopulationUnit",
    "PopulationSummary",
    "SampleSummary",
    "SampleDeviation",
    "summarize_population",
    "summarize_sample",
    "fpc",
    "sample_deviation",
    # estimators
    "FamilyKind",
    "SmoothFamily",
    "RatioExpParams",
    "usual_estimate",
    "ratio_estimate",
    "smooth_estimate",
    "ratio_exp_estimate",
    "regression_estimate",
    # moments
    "DesignMoments",
    "RatioExpCoefficients",
    "MseQuadratic",
    "OptimalWeights",
    "var_usual",
    "ratio_bias",
    "ratio_mse",
    "smooth_bias",
    "smooth_mse",
    "optimal_slope",
    "min_smooth_mse",
    "optimal_regression_slope",
    "ratio_exp_coefficients",
    "mse_quadratic",
    "mse_at_weights",
    "optimal_weights",
    "min_ratio_exp_mse",
    "ratio_exp_bias",
    "pre",
    "beats_usual",
    "beats_regression",
    # sampling
    "EstimatorKind",
    "EstimatorSpec",
    "EstimatorStats",
    "EmpiricalReport",
    "ExactReport",
    "DeviationMoments",
    "SyntheticSpec",
    "draw_srswor",
    "monte_carlo",
    "enumerate_exact",
    "exact_deviation_moments",
    "generate_population",
    # io
    "SummaryInput",
    "load_population_csv",
    "write_population_csv",
    "load_summary_json",
    # backends
    "available_backends",
    "default_backend",
]
