"""Stationarity analysis for long-memory time series.

The package measures deviation from second-order stationarity by the
squared L2 distance between the time-varying spectral density and its
time average, estimated from local periodograms on non-overlapping
blocks.  Two tests of the stationarity hypothesis are provided: an
asymptotic one based on a normal approximation of the standardized
distance estimate, and a bootstrap one that regenerates pseudo-series
from a fitted fractionally integrated AR model and is the method of
choice when the memory parameter is not small.

Typical use::

    from longstat import GaussianSource, FarimaSpec, simulate_farima, bootstrap_test
    from longstat import BootstrapConfig

    x = simulate_farima(FarimaSpec(d=0.2), 512, GaussianSource(1))
    result = bootstrap_test(x, BootstrapConfig(n_window=32, seed=2))
    print(result.reject, result.statistic, result.threshold)

The :mod:`longstat.harness` module replays full Monte Carlo size and
power studies; the ``longstat`` command line exposes everything without
writing Python.
"""

from .bootstrap import (
    BootstrapConfig,
    BootstrapDraws,
    bootstrap_distance_draws,
    bootstrap_replicate,
    bootstrap_test,
    order_statistic_index,
)
from .core import (
    BlockScheme,
    GaussianSource,
    as_series,
    make_block_scheme,
    normal_quantile,
)
from .errors import (
    DegenerateInputError,
    DomainError,
    FitFailureError,
    InvalidArgumentError,
    LongstatError,
)
from .estimators import (
    StatSummary,
    TestResult,
    asymptotic_test,
    bias_correction,
    distance_sq,
    quartic_sum,
    sum_sq_local,
    sum_sq_pooled,
    summarize,
)
from .farima import (
    ConstantFn,
    CosComposite,
    DEFAULT_BURN_IN,
    FarimaSpec,
    QuadratureResult,
    SineWave,
    SqrtSine,
    TvFarimaSpec,
    builtin_model,
    frac_diff,
    frac_diff_weights,
    frac_integrate,
    frac_integrate_weights,
    simulate_farima,
    simulate_tvfarima,
    theoretical_distance_sq,
    tv_spectral_density,
)
from .harness import (
    Experiment,
    McReport,
    ScenarioResult,
    STANDARD_SCENARIOS,
    VarianceCheck,
    describe_model,
    run_experiment,
    run_power_curve,
    scenario_label,
    standard_grid,
    tabulate_reports,
    variance_ratio_check,
)
from .spectral import (
    Periodogram,
    PeriodogramMatrix,
    full_periodogram,
    integrated_squared_local_periodogram,
    local_periodogram_matrix,
)
from .whittle import (
    WhittleFit,
    fit_whittle,
    select_order_aic,
    whittle_objective,
    whittle_spectral_density,
)

__version__ = "0.1.0"

__all__ = [
    "BlockScheme",
    "BootstrapConfig",
    "BootstrapDraws",
    "ConstantFn",
    "CosComposite",
    "DEFAULT_BURN_IN",
    "DegenerateInputError",
    "DomainError",
    "Experiment",
    "FarimaSpec",
    "FitFailureError",
    "GaussianSource",
    "InvalidArgumentError",
    "LongstatError",
    "McReport",
    "Periodogram",
    "PeriodogramMatrix",
    "QuadratureResult",
    "STANDARD_SCENARIOS",
    "ScenarioResult",
    "SineWave",
    "SqrtSine",
    "StatSummary",
    "TestResult",
    "TvFarimaSpec",
    "VarianceCheck",
    "WhittleFit",
    "as_series",
    "asymptotic_test",
    "bias_correction",
    "bootstrap_distance_draws",
    "bootstrap_replicate",
    "bootstrap_test",
    "builtin_model",
    "describe_model",
    "distance_sq",
    "fit_whittle",
    "frac_diff",
    "frac_diff_weights",
    "frac_integrate",
    "frac_integrate_weights",
    "full_periodogram",
    "integrated_squared_local_periodogram",
    "local_periodogram_matrix",
    "make_block_scheme",
    "normal_quantile",
    "order_statistic_index",
    "quartic_sum",
    "run_experiment",
    "run_power_curve",
    "scenario_label",
    "select_order_aic",
    "simulate_farima",
    "simulate_tvfarima",
    "standard_grid",
    "sum_sq_local",
    "sum_sq_pooled",
    "summarize",
    "tabulate_reports",
    "theoretical_distance_sq",
    "tv_spectral_density",
    "variance_ratio_check",
    "whittle_objective",
    "whittle_spectral_density",
]
