"""Two-phase Gaussian estimation of the mean-reversion model.

The observed series H follows

    dH = alpha * (mu(t) - H) dt + sigma * H^gamma dB,

with mu(t) a truncated cosine series over one fundamental period. Phase 1
plugs the HP trend m and its slope m_dot into the closed-form maximum
likelihood solutions from the Euler discretization and recovers the trend
signal mu_hat = m + m_dot/alpha. Phase 2 extracts mu_hat's dominant
harmonics by DFT and re-estimates alpha and sigma against the truncated
cosine reconstruction, which no longer needs a derivative term.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, EstimationError, NumericError, SizeError
from .series import TimeSeries, describe
from .trend import DEFAULT_LAMBDA, TrendEstimate, estimate_trend

DEFAULT_RMS_TOL = 1e-5


@dataclass(frozen=True)
class SDEParams:
    """Constant coefficients of the reversion equation."""

    alpha: float  # reversion rate, per year
    sigma: float  # volatility
    gamma: float = 0.0  # variance elasticity w.r.t. the level

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not self.sigma >= 0:
            raise DomainError(f"sigma must be non-negative, got {self.sigma}")
        if self.gamma < 0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma}")


@dataclass(frozen=True)
class HarmonicModel:
    """Single-sided cosine representation of the reversion level.

    Each term (k, a, phi) contributes a*cos(2*pi*k*n/N + phi) at sample n,
    with N = n_samples covering one fundamental period. Evaluation is
    periodic in n by construction, so forecasts beyond the fitted period
    wrap onto the same seasonal pattern. The k=0 term carries the signal
    mean with phi fixed at 0 (its amplitude is signed, positive for any
    positive-mean series).
    """

    base_period_years: float
    n_samples: int
    terms: tuple  # of (k, a_k, phi_k)

    def __post_init__(self):
        ks = [k for k, _, _ in self.terms]
        if len(ks) != len(set(ks)):
            raise DomainError("harmonic indices must be unique")
        if not self.base_period_years > 0:
            raise DomainError("base_period_years must be positive")
        if self.n_samples < 1:
            raise DomainError("n_samples must be positive")


@dataclass(frozen=True)
class ModelFit:
    """Everything the fit of one fundamental period produced."""

    phase1: SDEParams
    phase2: SDEParams
    mu_hat: np.ndarray
    harmonics: HarmonicModel
    rms_trace: tuple  # of (L, rms)
    sigma_H: float
    h_last: float  # last observation; default start level for simulation

    def to_dict(self) -> dict:
        return {
            "alpha": self.phase2.alpha,
            "sigma": self.phase2.sigma,
            "gamma": self.phase2.gamma,
            "sigma_H": self.sigma_H,
            "base_period_years": self.harmonics.base_period_years,
            "n_samples": self.harmonics.n_samples,
            "terms": [
                {"k": int(k), "a": float(a), "phi": float(phi)}
                for k, a, phi in self.harmonics.terms
            ],
            "rms_trace": [[int(l), float(r)] for l, r in self.rms_trace],
            "phase1": {"alpha": self.phase1.alpha, "sigma": self.phase1.sigma},
            "h_last": self.h_last,
        }

    def to_json(self, **extra) -> str:
        doc = self.to_dict()
        doc.update(extra)
        return json.dumps(doc, indent=2, sort_keys=True)


def model_from_dict(doc: dict) -> tuple[HarmonicModel, SDEParams, float, float]:
    """Rebuild (harmonics, phase-2 params, sigma_H, h_last) from a fit document."""
    model = HarmonicModel(
        base_period_years=float(doc["base_period_years"]),
        n_samples=int(doc["n_samples"]),
        terms=tuple((int(t["k"]), float(t["a"]), float(t["phi"])) for t in doc["terms"]),
    )
    params = SDEParams(
        alpha=float(doc["alpha"]), sigma=float(doc["sigma"]), gamma=float(doc["gamma"])
    )
    return model, params, float(doc["sigma_H"]), float(doc["h_last"])


def _weights(h_prev: np.ndarray, gamma: float) -> np.ndarray:
    if gamma != 0.0 and np.any(h_prev <= 0.0):
        raise DomainError("series values must be positive when gamma != 0")
    return h_prev**gamma


def estimate_phase1(
    series: TimeSeries, trend: TrendEstimate, gamma: float = 0.0
) -> tuple[SDEParams, np.ndarray]:
    """Closed-form alpha and sigma from the Euler discretization.

    Uses the trend level m as a stand-in for E[H] and its slope m_dot for
    the drift correction; returns the parameters together with the phase-1
    trend signal mu_hat = m + m_dot/alpha.
    """
    h = series.values
    if trend.m.shape != h.shape:
        raise SizeError("series and trend must be aligned")
    dt = series.dt_years
    dh = np.diff(h)
    h_prev = h[:-1]
    w = _weights(h_prev, gamma)
    dev = trend.m[:-1] - h_prev
    den = float(((dev / w) ** 2).sum()) * dt
    if den <= 0.0 or not np.isfinite(den):
        raise NumericError("degenerate estimator: trend deviations have no variance")
    num = float(((dh - trend.m_dot[:-1] * dt) * dev / w**2).sum())
    alpha = num / den
    if alpha <= 0.0:
        raise EstimationError(f"no mean reversion detected (alpha hat = {alpha:.4g})")
    resid = (dh - (alpha * dev + trend.m_dot[:-1]) * dt) / w
    sigma = float(np.sqrt((resid**2).sum() / (dh.size * dt)))
    mu_hat = trend.m + trend.m_dot / alpha
    return SDEParams(alpha=alpha, sigma=sigma, gamma=gamma), mu_hat


def extract_harmonics(mu_hat) -> list[tuple[int, float, float]]:
    """Full single-sided spectrum (k, a_k, phi_k) of a real signal.

    Amplitudes are scaled so the cosine reconstruction reproduces the
    input exactly: a_0 is the (signed) mean, a_k = 2|M_k|/N for interior
    harmonics and |M_k|/N for the Nyquist term of an even-length signal.
    """
    x = np.asarray(mu_hat, dtype=float)
    n = x.size
    if n < 4:
        raise SizeError(f"extract_harmonics needs at least 4 samples, got {n}")
    spec = np.fft.rfft(x)
    terms = [(0, float(spec[0].real) / n, 0.0)]
    n_half = n // 2
    for k in range(1, n_half + 1):
        scale = 1.0 if (k == n_half and n % 2 == 0) else 2.0
        terms.append(
            (k, scale * float(np.abs(spec[k])) / n, float(np.angle(spec[k])))
        )
    return terms


def evaluate_mu(model: HarmonicModel, n):
    """Cosine-series value(s) at sample index n (scalar or array).

    Indices beyond one period wrap automatically: every term is periodic
    in n with period n_samples.
    """
    n_arr = np.asarray(n, dtype=float)
    out = np.zeros_like(n_arr)
    base = 2.0 * np.pi / model.n_samples
    for k, a, phi in model.terms:
        out = out + a * np.cos(base * k * n_arr + phi)
    return float(out) if np.ndim(n) == 0 else out


def _term_mean_square(k: int, a: float, phi: float, n_samples: int) -> float:
    """Mean of (a*cos(2*pi*k*n/N + phi))^2 over one period.

    Exactly a^2/2 by orthogonality except for the Nyquist term of an even
    N, where the cosine degenerates to +/- cos(phi).
    """
    if 2 * k == n_samples:
        return a * a * math.cos(phi) ** 2
    return 0.5 * a * a


def truncate_harmonics(
    spectrum,
    n_samples: int,
    base_period_years: float,
    rms_tol: float | None = DEFAULT_RMS_TOL,
    fixed_count: int | None = None,
) -> tuple[HarmonicModel, tuple]:
    """Keep the dominant cosines of a spectrum, recording the RMS trace.

    The constant term is always kept; the oscillatory terms are added
    largest first. After the L-th addition the trace records
    RMS(L) = mean((mu_L - mu_{L-1})^2), the mean square of the term just
    added, so ordering by term mean square makes the trace non-increasing
    by construction. (That order coincides with descending amplitude
    everywhere except the even-N Nyquist term, whose single-sided
    amplitude is not doubled.) With a tolerance, the first candidate whose
    RMS falls below it is dropped and selection stops; with
    ``fixed_count``, exactly that many oscillatory terms are kept and the
    tolerance is ignored.
    """
    if fixed_count is None and (rms_tol is None or rms_tol <= 0.0):
        raise ConfigError("need a positive rms tolerance or a fixed term count")
    if fixed_count is not None and fixed_count < 0:
        raise ConfigError(f"fixed_count must be >= 0, got {fixed_count}")
    spectrum = list(spectrum)
    if not spectrum:
        raise SizeError("empty spectrum")
    dc = [t for t in spectrum if t[0] == 0]
    if not dc:
        raise DomainError("spectrum must include the k=0 term")
    rest = sorted(
        (t for t in spectrum if t[0] != 0),
        key=lambda t: (-_term_mean_square(t[0], t[1], t[2], n_samples), t[0]),
    )
    kept = [dc[0]]
    trace = []
    for l, (k, a, phi) in enumerate(rest, start=1):
        rms = _term_mean_square(k, a, phi, n_samples)
        if fixed_count is not None:
            if l > fixed_count:
                break
        elif rms < rms_tol:
            break
        kept.append((k, a, phi))
        trace.append((l, rms))
    model = HarmonicModel(
        base_period_years=base_period_years,
        n_samples=n_samples,
        terms=tuple(kept),
    )
    return model, tuple(trace)


def estimate_phase2(
    series: TimeSeries, model: HarmonicModel, gamma: float = 0.0
) -> SDEParams:
    """Re-estimate alpha and sigma against the truncated cosine trend.

    Same closed forms as phase 1 with the reconstruction standing in for
    the trend; the derivative term drops out because the reversion level
    is now the model's own mu.
    """
    h = series.values
    dt = series.dt_years
    dh = np.diff(h)
    h_prev = h[:-1]
    w = _weights(h_prev, gamma)
    mu = evaluate_mu(model, np.arange(dh.size))
    dev = mu - h_prev
    den = float(((dev / w) ** 2).sum()) * dt
    if den <= 0.0 or not np.isfinite(den):
        raise NumericError("degenerate estimator: trend deviations have no variance")
    num = float((dh * dev / w**2).sum())
    alpha = num / den
    if alpha <= 0.0:
        raise EstimationError(f"no mean reversion detected (alpha hat = {alpha:.4g})")
    resid = (dh - alpha * dev * dt) / w
    sigma = float(np.sqrt((resid**2).sum() / (dh.size * dt)))
    return SDEParams(alpha=alpha, sigma=sigma, gamma=gamma)


def fit(
    series: TimeSeries,
    lam: float = DEFAULT_LAMBDA,
    gamma: float = 0.0,
    rms_tol: float | None = DEFAULT_RMS_TOL,
    fixed_count: int | None = None,
) -> ModelFit:
    """Full two-phase fit of one fundamental period."""
    trend = estimate_trend(series, lam)
    phase1, mu_hat = estimate_phase1(series, trend, gamma)
    spectrum = extract_harmonics(mu_hat)
    model, trace = truncate_harmonics(
        spectrum,
        n_samples=mu_hat.size,
        base_period_years=mu_hat.size * series.dt_years,
        rms_tol=rms_tol,
        fixed_count=fixed_count,
    )
    phase2 = estimate_phase2(series, model, gamma)
    return ModelFit(
        phase1=phase1,
        phase2=phase2,
        mu_hat=mu_hat,
        harmonics=model,
        rms_trace=trace,
        sigma_H=describe(series).std_dev,
        h_last=float(series.values[-1]),
    )
