"""Diagnostic battery for periodicity, normality, unit roots and mean reversion.

The battery mirrors the checks a periodic mean-reversion model requires
before estimation: a hidden periodicity must be present (periodogram +
Fisher's g), increments must be near-Gaussian (Jarque-Bera), levels must
be non-explosive (ADF) and the variance-ratio profile must fall below one
at long horizons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from statsmodels.tsa.stattools import adfuller

from .errors import DomainError, NumericError, SizeError
from .series import TimeSeries, describe, difference


@dataclass(frozen=True)
class Periodogram:
    """Ordinates I(w_k) at the Fourier frequencies k = 1..floor(n/2)."""

    frequencies: np.ndarray  # cycles per sample
    ordinates: np.ndarray
    n: int


@dataclass(frozen=True)
class GTestResult:
    g: float
    p_value: float
    peak_index: int  # Fourier index k of the largest ordinate


@dataclass(frozen=True)
class JBResult:
    statistic: float
    p_value: float
    skewness: float
    kurtosis: float


@dataclass(frozen=True)
class ADFResult:
    statistic: float
    lag: int
    n_obs: int
    critical_values: dict


@dataclass(frozen=True)
class VRResult:
    k: int
    vr: float
    z_robust: float
    z_homo: float


@dataclass(frozen=True)
class TestReport:
    """All diagnostics for one period slice."""

    label: str
    mean: float
    std_dev: float
    adf: ADFResult
    diff_mean: float
    diff_std_dev: float
    adf_diff: ADFResult
    jarque_bera: JBResult
    g_test: GTestResult
    vr: list[VRResult] = field(default_factory=list)

    def to_records(self) -> list[dict]:
        """Flat {name, statistic, p_value, params} records for serialization."""
        records = [
            {"name": "mean", "statistic": self.mean, "p_value": None, "params": {}},
            {"name": "std_dev", "statistic": self.std_dev, "p_value": None, "params": {}},
            {
                "name": "adf",
                "statistic": self.adf.statistic,
                "p_value": None,
                "params": {
                    "lag": self.adf.lag,
                    "critical_values": self.adf.critical_values,
                },
            },
            {
                "name": "adf_diff",
                "statistic": self.adf_diff.statistic,
                "p_value": None,
                "params": {
                    "lag": self.adf_diff.lag,
                    "critical_values": self.adf_diff.critical_values,
                },
            },
            {
                "name": "jarque_bera_diff",
                "statistic": self.jarque_bera.statistic,
                "p_value": self.jarque_bera.p_value,
                "params": {
                    "skewness": self.jarque_bera.skewness,
                    "kurtosis": self.jarque_bera.kurtosis,
                },
            },
            {
                "name": "fisher_g",
                "statistic": self.g_test.g,
                "p_value": self.g_test.p_value,
                "params": {"peak_index": self.g_test.peak_index},
            },
        ]
        for r in self.vr:
            records.append(
                {
                    "name": f"variance_ratio_{r.k}",
                    "statistic": r.vr,
                    "p_value": 2.0 * stats.norm.sf(abs(r.z_robust)),
                    "params": {"z_robust": r.z_robust, "z_homo": r.z_homo},
                }
            )
        return records


def periodogram(series: TimeSeries) -> Periodogram:
    """Periodogram I(w_k) = |DFT_k|^2 / n of the mean-removed series."""
    x = series.values
    n = x.size
    if n < 4:
        raise SizeError(f"periodogram needs at least 4 points, got {n}")
    spec = np.fft.rfft(x - x.mean())
    m = n // 2
    ords = (spec.real[1 : m + 1] ** 2 + spec.imag[1 : m + 1] ** 2) / n
    freqs = np.arange(1, m + 1) / n
    return Periodogram(frequencies=freqs, ordinates=ords, n=n)


def fisher_g_p_value(g: float, m: int) -> float:
    """Exact null tail probability P(G > g) of Fisher's g over m ordinates.

    P(G > g) = sum_{j=1}^{floor(1/g)} (-1)^{j-1} C(m, j) (1 - j*g)^{m-1},
    evaluated term by term in log space to avoid binomial overflow. The
    alternating sum lives in [0, 1]; float cancellation noise is clipped.
    """
    if not 0.0 < g <= 1.0:
        raise DomainError(f"g must lie in (0, 1], got {g}")
    j_max = min(m, int(1.0 / g))
    total = 0.0
    log_binom = 0.0  # log C(m, 0)
    for j in range(1, j_max + 1):
        log_binom += math.log(m - j + 1) - math.log(j)
        one_minus = 1.0 - j * g
        if one_minus <= 0.0:
            break
        log_term = log_binom + (m - 1) * math.log(one_minus)
        if log_term > 700.0:
            # only reachable for g within O(1/m) of its lower bound 1/m,
            # where the tail probability is indistinguishable from 1
            return 1.0
        total += (-1.0) ** (j - 1) * math.exp(log_term)
    return min(max(total, 0.0), 1.0)


def fisher_g_test(pg: Periodogram) -> GTestResult:
    """Fisher's test of the largest periodogram peak against white noise."""
    ords = pg.ordinates
    if ords.size < 3:
        raise SizeError(f"need at least 3 ordinates, got {ords.size}")
    total = float(ords.sum())
    if total <= 0.0:
        raise DomainError("degenerate periodogram: all ordinates are zero")
    peak = int(np.argmax(ords))
    g = float(ords[peak]) / total
    return GTestResult(
        g=g, p_value=fisher_g_p_value(g, ords.size), peak_index=peak + 1
    )


def jarque_bera(series: TimeSeries) -> JBResult:
    """Jarque-Bera normality statistic JB = n/6 (S^2 + (K-3)^2/4).

    Skewness S and kurtosis K use n-denominator central moments; the
    p-value comes from the chi-squared distribution with 2 df.
    """
    x = series.values
    n = x.size
    if n < 8:
        raise SizeError(f"jarque_bera needs at least 8 points, got {n}")
    centered = x - x.mean()
    m2 = float(np.mean(centered**2))
    if m2 <= 0.0:
        raise DomainError("jarque_bera undefined for a zero-variance series")
    skew = float(np.mean(centered**3)) / m2**1.5
    kurt = float(np.mean(centered**4)) / m2**2
    jb = n / 6.0 * (skew**2 + 0.25 * (kurt - 3.0) ** 2)
    return JBResult(
        statistic=jb,
        p_value=float(stats.chi2.sf(jb, 2)),
        skewness=skew,
        kurtosis=kurt,
    )


def default_adf_max_lag(n: int) -> int:
    """Schwert rule floor(12 * (n/100)^(1/4))."""
    return int(12.0 * (n / 100.0) ** 0.25)


def adf_test(series: TimeSeries, max_lag: int | None = None) -> ADFResult:
    """Augmented Dickey-Fuller test with constant, lag order picked by BIC.

    Returns the t-statistic on the lagged level, the chosen lag order and
    the MacKinnon critical values for comparison.
    """
    x = series.values
    if max_lag is None:
        max_lag = default_adf_max_lag(x.size)
    if x.size <= max_lag + 2:
        raise SizeError(
            f"series length {x.size} too short for max_lag={max_lag}"
        )
    try:
        stat, _pvalue, lag, n_obs, crit, _ic = adfuller(
            x, maxlag=max_lag, regression="c", autolag="BIC"
        )
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"ADF regression failed: {exc}") from exc
    return ADFResult(
        statistic=float(stat),
        lag=int(lag),
        n_obs=int(n_obs),
        critical_values={k: float(v) for k, v in crit.items()},
    )


def variance_ratio_test(series: TimeSeries, horizons=(2, 4, 8, 16)) -> list[VRResult]:
    """Overlapping variance-ratio tests of the random-walk null.

    For each horizon k, VR(k) is the bias-adjusted variance of overlapping
    k-period increments divided by k times the one-period increment
    variance. Both the homoskedastic z and the heteroskedasticity-robust z
    are returned; VR(k) well below one at long k signals mean reversion.
    """
    y = series.values
    nq = y.size - 1  # number of one-period increments
    horizons = sorted({int(k) for k in horizons})
    if any(k < 2 for k in horizons):
        raise DomainError("variance-ratio horizons must be >= 2")
    if y.size < 10 * horizons[-1]:
        raise SizeError(
            f"series length {y.size} too short for horizon k={horizons[-1]}"
        )
    inc = np.diff(y)
    mu = (y[-1] - y[0]) / nq
    dev = inc - mu
    sq_dev = dev**2
    var1 = float(sq_dev.sum()) / (nq - 1)
    if var1 <= 0.0:
        raise DomainError("variance ratio undefined for a constant series")
    results = []
    for k in horizons:
        # the m normalization spreads the k-period variance back to one
        # period and applies the overlapping-sample bias adjustment
        mk = k * (nq - k + 1) * (1.0 - k / nq)
        inc_k = y[k:] - y[:-k]
        var_k = float(((inc_k - k * mu) ** 2).sum()) / mk
        vr = var_k / var1
        phi = 2.0 * (2 * k - 1) * (k - 1) / (3.0 * k * nq)
        z_homo = (vr - 1.0) / math.sqrt(phi)
        theta = 0.0
        denom = float(sq_dev.sum()) ** 2
        for j in range(1, k):
            delta_j = nq * float((sq_dev[j:] * sq_dev[:-j]).sum()) / denom
            theta += (2.0 * (k - j) / k) ** 2 * delta_j
        z_robust = (vr - 1.0) / math.sqrt(theta / nq)
        results.append(VRResult(k=k, vr=vr, z_robust=z_robust, z_homo=z_homo))
    return results


def diagnose(
    series: TimeSeries,
    horizons=(2, 4, 8, 16),
    max_lag: int | None = None,
    label: str = "",
) -> TestReport:
    """Run the full battery on one period slice.

    Levels get the descriptive stats, ADF and Fisher's g; the first
    difference gets its own stats, ADF and the Jarque-Bera normality
    check; the variance ratios are computed from the level series.
    """
    d = difference(series)
    level_stats = describe(series)
    diff_stats = describe(d)
    return TestReport(
        label=label or series.label,
        mean=level_stats.mean,
        std_dev=level_stats.std_dev,
        adf=adf_test(series, max_lag),
        diff_mean=diff_stats.mean,
        diff_std_dev=diff_stats.std_dev,
        adf_diff=adf_test(d, max_lag),
        jarque_bera=jarque_bera(d),
        g_test=fisher_g_test(periodogram(series)),
        vr=variance_ratio_test(series, horizons),
    )


def bonferroni(p_values) -> list[float]:
    """Multiple-testing adjustment across the fundamental periods."""
    g = len(p_values)
    return [min(1.0, g * p) for p in p_values]
