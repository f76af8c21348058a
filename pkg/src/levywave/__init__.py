"""levywave: wave equation driven by centered jump noise — simulation and
verification of its Gaussian fluctuation limits."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    CoverageError,
    DomainError,
    LevyWaveError,
    ModelRejectedError,
)
from .noise import LevyModel, PointConfiguration, SpaceTimeWindow, sample_prm
from .oracle import GammaBounds, MomentOracle
from .solver import (
    PiecewiseField,
    PointValue,
    Solution,
    WindowIntegral,
    add_one_cost,
    evaluate_field,
    second_add_one_cost,
    solve,
    solve_fast,
    solve_naive,
)
from .fields import (
    SpatialIntegralSeries,
    ergodic_mean,
    integral_series,
    spatial_integral,
    standardize,
    theta_grid,
)
from .metrics import (
    WeightedEmpiricalMeasure,
    fortet_mourier,
    kolmogorov,
    wasserstein1,
)
from .experiments import (
    ExperimentResult,
    asclt_experiment,
    clt_experiment,
    covariance_decay_experiment,
    dyadic_ts,
    gaussian_calibration,
    il_criterion_scan,
    il_statistic,
    lemma1_demo,
    log_average,
    poincare_gamma_check,
    simulate_series,
)

__all__ = [
    "__version__",
    "LevyWaveError",
    "ConfigError",
    "CoverageError",
    "DomainError",
    "ModelRejectedError",
    "LevyModel",
    "SpaceTimeWindow",
    "PointConfiguration",
    "sample_prm",
    "MomentOracle",
    "GammaBounds",
    "Solution",
    "solve",
    "solve_naive",
    "solve_fast",
    "PiecewiseField",
    "evaluate_field",
    "PointValue",
    "WindowIntegral",
    "add_one_cost",
    "second_add_one_cost",
    "theta_grid",
    "spatial_integral",
    "integral_series",
    "SpatialIntegralSeries",
    "standardize",
    "ergodic_mean",
    "WeightedEmpiricalMeasure",
    "kolmogorov",
    "wasserstein1",
    "fortet_mourier",
    "ExperimentResult",
    "simulate_series",
    "log_average",
    "il_statistic",
    "clt_experiment",
    "asclt_experiment",
    "il_criterion_scan",
    "covariance_decay_experiment",
    "lemma1_demo",
    "poincare_gamma_check",
    "gaussian_calibration",
    "dyadic_ts",
]
