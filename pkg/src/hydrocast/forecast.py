"""Forecast bands and containment probabilities.

Two band constructions are emitted: the pointwise min/max envelope of the
simulated ensemble, and sigma-multiplier bands centered on the harmonic
reversion level, mu(t) +/- i * sigma_H, where sigma_H is the historical
standard deviation of the fitted series and i runs over a grid of
multipliers (0.5 to 2.6 by 0.1 unless configured otherwise). Coverage is
the fraction of points of a path (or of a held-out realization) falling
inside a band, averaged over paths for ensembles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SizeError
from .estimation import ModelFit, evaluate_mu
from .series import TimeSeries
from .simulate import SimulationEnsemble, envelope, summarize


def default_multipliers() -> np.ndarray:
    """The 22-point grid 0.5, 0.6, ..., 2.6."""
    return np.round(np.arange(5, 27) * 0.1, 10)


@dataclass(frozen=True)
class BandSet:
    """Nested intervals center +/- multiplier * sigma_H, one row per multiplier."""

    multipliers: np.ndarray
    center: np.ndarray
    sigma_H: float
    lower: np.ndarray  # (n_multipliers, horizon)
    upper: np.ndarray

    @property
    def horizon(self) -> int:
        return self.center.size


@dataclass(frozen=True)
class CoverageTable:
    multipliers: np.ndarray
    forecast: np.ndarray  # mean per-path containment fraction
    holdout: np.ndarray | None = None

    @property
    def difference(self) -> np.ndarray | None:
        if self.holdout is None:
            return None
        return self.holdout - self.forecast

    def rows(self) -> list[tuple]:
        """(multiplier, forecast, holdout, difference) per grid point."""
        out = []
        for i, m in enumerate(self.multipliers):
            if self.holdout is None:
                out.append((float(m), float(self.forecast[i]), None, None))
            else:
                out.append(
                    (
                        float(m),
                        float(self.forecast[i]),
                        float(self.holdout[i]),
                        float(self.holdout[i] - self.forecast[i]),
                    )
                )
        return out


def build_bands(fit: ModelFit, horizon_steps: int, multipliers=None) -> BandSet:
    """Sigma-multiplier bands around the fitted reversion level.

    The center at step i is the harmonic model evaluated at i, wrapping
    periodically past the fitted period.
    """
    if horizon_steps < 1:
        raise SizeError(f"horizon_steps must be >= 1, got {horizon_steps}")
    mult = default_multipliers() if multipliers is None else np.asarray(
        multipliers, dtype=float
    )
    if mult.size == 0:
        raise ConfigError("need at least one band multiplier")
    if np.any(mult < 0):
        raise ConfigError("band multipliers must be non-negative")
    mult = np.sort(mult)
    center = evaluate_mu(fit.harmonics, np.arange(horizon_steps))
    half = mult[:, None] * fit.sigma_H
    return BandSet(
        multipliers=mult,
        center=center,
        sigma_H=fit.sigma_H,
        lower=center[None, :] - half,
        upper=center[None, :] + half,
    )


def ensemble_coverage(ensemble: SimulationEnsemble, bands: BandSet) -> np.ndarray:
    """Mean per-path fraction of points inside each band (closed intervals)."""
    paths = ensemble.paths
    if paths.shape[1] != bands.horizon:
        raise SizeError(
            f"ensemble horizon {paths.shape[1]} != band horizon {bands.horizon}"
        )
    out = np.empty(bands.multipliers.size)
    for i in range(bands.multipliers.size):
        inside = (paths >= bands.lower[i]) & (paths <= bands.upper[i])
        out[i] = inside.mean(axis=1).mean()
    return out


def holdout_coverage(series: TimeSeries, bands: BandSet) -> np.ndarray:
    """Fraction of held-out observations inside each band."""
    x = series.values
    if x.size != bands.horizon:
        raise SizeError(
            f"holdout length {x.size} != band horizon {bands.horizon}"
        )
    out = np.empty(bands.multipliers.size)
    for i in range(bands.multipliers.size):
        out[i] = np.mean((x >= bands.lower[i]) & (x <= bands.upper[i]))
    return out


@dataclass(frozen=True)
class ForecastReport:
    """Envelope, bands and coverage for one simulated horizon."""

    bands: BandSet
    envelope_lower: np.ndarray
    envelope_upper: np.ndarray
    ensemble_summary: dict
    coverage: CoverageTable


def forecast_report(
    fit: ModelFit,
    ensemble: SimulationEnsemble,
    holdout: TimeSeries | None = None,
    multipliers=None,
) -> ForecastReport:
    """Assemble bands, the ensemble envelope and the coverage table.

    The band horizon matches the ensemble (n_steps + 1 points including the
    shared start value). When a held-out series of the same length is given
    its containment column and the difference column are filled in.
    """
    horizon = ensemble.paths.shape[1]
    bands = build_bands(fit, horizon, multipliers)
    lower, upper = envelope(ensemble)
    forecast_cov = ensemble_coverage(ensemble, bands)
    holdout_cov = None
    if holdout is not None:
        if len(holdout) != horizon:
            raise SizeError(
                f"holdout has {len(holdout)} points but the forecast horizon "
                f"is {horizon}"
            )
        holdout_cov = holdout_coverage(holdout, bands)
    return ForecastReport(
        bands=bands,
        envelope_lower=lower,
        envelope_upper=upper,
        ensemble_summary=summarize(ensemble),
        coverage=CoverageTable(
            multipliers=bands.multipliers,
            forecast=forecast_cov,
            holdout=holdout_cov,
        ),
    )
