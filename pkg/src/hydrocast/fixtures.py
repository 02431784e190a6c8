"""Ground-truth synthetic series for recovery studies.

The reference discharge data are proprietary, so recovery tests run on
single Euler paths generated from known parameters at the magnitudes the
estimation is meant to handle: reversion near 112/year, volatility near
3, a 3-year fundamental period sampled daily, and cosine amplitudes a few
tenths of a log-unit.
"""

from __future__ import annotations

import datetime
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .estimation import HarmonicModel, SDEParams, evaluate_mu
from .series import DEFAULT_DT_YEARS, TimeSeries

DEFAULT_START_DATE = datetime.date(2004, 2, 5)


@dataclass(frozen=True)
class FixtureSpec:
    """Everything needed to regenerate one synthetic series."""

    params: SDEParams
    harmonics: HarmonicModel
    n_steps: int  # Euler updates; the series has n_steps + 1 points
    h0: float
    seed: int
    dt_years: float = DEFAULT_DT_YEARS

    def to_dict(self) -> dict:
        return {
            "alpha": self.params.alpha,
            "sigma": self.params.sigma,
            "gamma": self.params.gamma,
            "base_period_years": self.harmonics.base_period_years,
            "n_samples": self.harmonics.n_samples,
            "terms": [
                {"k": int(k), "a": float(a), "phi": float(phi)}
                for k, a, phi in self.harmonics.terms
            ],
            "n_steps": self.n_steps,
            "h0": self.h0,
            "seed": self.seed,
            "dt_years": self.dt_years,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def reference_fixture(seed: int = 0, gamma: float = 0.0) -> FixtureSpec:
    """Default fixture: one 3-year fundamental period at daily sampling."""
    harmonics = HarmonicModel(
        base_period_years=3.0,
        n_samples=1095,
        terms=((0, 7.39, 0.0), (3, 0.29, -2.77), (6, 0.22, 2.82)),
    )
    return FixtureSpec(
        params=SDEParams(alpha=112.0, sigma=3.0, gamma=gamma),
        harmonics=harmonics,
        n_steps=1094,
        h0=7.39,
        seed=seed,
    )


def generate(spec: FixtureSpec) -> tuple[TimeSeries, FixtureSpec]:
    """One Euler-Maruyama path from the true model, plus its ground truth."""
    rng = np.random.default_rng(spec.seed)
    alpha, sigma, gamma = spec.params.alpha, spec.params.sigma, spec.params.gamma
    dt = spec.dt_years
    sqrt_dt = math.sqrt(dt)
    mu = evaluate_mu(spec.harmonics, np.arange(spec.n_steps))
    eps = rng.standard_normal(spec.n_steps)
    values = np.empty(spec.n_steps + 1)
    values[0] = spec.h0
    h = spec.h0
    for i in range(spec.n_steps):
        if gamma != 0.0 and h <= 0:
            raise DomainError("path hit a non-positive state with gamma != 0")
        h = h + alpha * (mu[i] - h) * dt + sigma * h**gamma * sqrt_dt * eps[i]
        values[i + 1] = h
    series = TimeSeries(
        start_date=DEFAULT_START_DATE,
        values=values,
        dt_years=dt,
        label=f"synthetic (seed {spec.seed})",
    )
    return series, spec


def write_fixture(spec: FixtureSpec, directory) -> tuple:
    """Write the fixture series (same CSV schema as ingested series) plus a
    ground-truth JSON sidecar; returns (csv_path, json_path)."""
    from pathlib import Path

    from .series import write_series_csv

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    series, _ = generate(spec)
    csv_path = directory / "fixture.csv"
    json_path = directory / "fixture_truth.json"
    write_series_csv(series, csv_path)
    json_path.write_text(spec.to_json() + "\n", encoding="utf-8")
    return csv_path, json_path
