"""Mean-reversion modeling and Monte Carlo forecasting of periodic series.

The pipeline: ingest per-river discharge records, aggregate and
log-transform them, check periodicity / normality / mean reversion,
fit the reversion equation with a cosine-series reversion level, then
simulate antithetic Euler ensembles and score forecast bands.
"""

__version__ = "0.1.0"

from .diagnostics import (
    ADFResult,
    GTestResult,
    JBResult,
    Periodogram,
    TestReport,
    VRResult,
    adf_test,
    diagnose,
    fisher_g_p_value,
    fisher_g_test,
    jarque_bera,
    periodogram,
    variance_ratio_test,
)
from .errors import (
    ConfigError,
    DomainError,
    EstimationError,
    GapError,
    HydrocastError,
    NumericError,
    ParseError,
    SeriesRangeError,
    SizeError,
)
from .estimation import (
    HarmonicModel,
    ModelFit,
    SDEParams,
    estimate_phase1,
    estimate_phase2,
    evaluate_mu,
    extract_harmonics,
    fit,
    truncate_harmonics,
)
from .fixtures import FixtureSpec, generate, reference_fixture
from .forecast import (
    BandSet,
    CoverageTable,
    ForecastReport,
    build_bands,
    default_multipliers,
    ensemble_coverage,
    forecast_report,
    holdout_coverage,
)
from .series import (
    DescriptiveStats,
    Region,
    RiverRecord,
    TimeSeries,
    aggregate_system,
    describe,
    difference,
    ingest_csv,
    log_transform,
    read_series_csv,
    slice_period,
    write_series_csv,
)
from .simulate import (
    SimulationConfig,
    SimulationEnsemble,
    envelope,
    euler_step,
    simulate_ensemble,
)
from .trend import TrendEstimate, estimate_trend, hp_filter, three_point_derivative

__all__ = [
    "ADFResult",
    "BandSet",
    "ConfigError",
    "CoverageTable",
    "DescriptiveStats",
    "DomainError",
    "EstimationError",
    "FixtureSpec",
    "ForecastReport",
    "GTestResult",
    "GapError",
    "HarmonicModel",
    "HydrocastError",
    "JBResult",
    "ModelFit",
    "NumericError",
    "ParseError",
    "Periodogram",
    "Region",
    "RiverRecord",
    "SDEParams",
    "SeriesRangeError",
    "SimulationConfig",
    "SimulationEnsemble",
    "SizeError",
    "TestReport",
    "TimeSeries",
    "TrendEstimate",
    "VRResult",
    "adf_test",
    "aggregate_system",
    "build_bands",
    "default_multipliers",
    "describe",
    "diagnose",
    "difference",
    "ensemble_coverage",
    "envelope",
    "estimate_phase1",
    "estimate_phase2",
    "estimate_trend",
    "euler_step",
    "evaluate_mu",
    "extract_harmonics",
    "fisher_g_p_value",
    "fisher_g_test",
    "fit",
    "forecast_report",
    "generate",
    "holdout_coverage",
    "hp_filter",
    "ingest_csv",
    "jarque_bera",
    "log_transform",
    "reference_fixture",
    "periodogram",
    "read_series_csv",
    "simulate_ensemble",
    "slice_period",
    "three_point_derivative",
    "truncate_harmonics",
    "variance_ratio_test",
    "write_series_csv",
]
