"""Smooth trend level and slope of a series.

The trend m(t) is the Hodrick-Prescott smoother: the minimizer of

    sum_i (x_i - m_i)^2 + lam * sum_i (m_{i+1} - 2 m_i + m_{i-1})^2

obtained by solving the symmetric pentadiagonal system (I + lam * D'D) m = x,
with D the second-difference operator. Its time derivative is taken with
second-order three-point rules so that m_dot is expressed per year.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solveh_banded

from .errors import SizeError
from .series import TimeSeries

DEFAULT_LAMBDA = 40000.0


@dataclass(frozen=True)
class TrendEstimate:
    """HP trend and its per-year derivative, aligned with the input series."""

    m: np.ndarray
    m_dot: np.ndarray
    lam: float


def hp_filter(values, lam: float = DEFAULT_LAMBDA) -> np.ndarray:
    """Hodrick-Prescott trend of a 1-d array.

    Solved in cycle form: with A = I + lam*D'D, the trend m satisfies
    A m = x, equivalently m = x - c where A c = lam*D'D x. Factoring the
    pentadiagonal A once (banded Cholesky) and solving for the small cycle
    keeps rounding at the scale of the cycle, so constant and linear
    inputs come back essentially exactly for any lam.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 4:
        raise SizeError(f"hp_filter needs at least 4 points, got {n}")
    if not lam > 0:
        raise SizeError(f"lambda must be positive, got {lam}")
    # upper banded storage of I + lam*D'D (bandwidth 2)
    ab = np.zeros((3, n))
    ab[0, 2:] = lam
    ab[1, 1:] = -4.0 * lam
    ab[1, 1] = -2.0 * lam
    ab[1, -1] = -2.0 * lam
    ab[2, :] = 1.0 + 6.0 * lam
    ab[2, 0] = ab[2, -1] = 1.0 + lam
    ab[2, 1] = ab[2, -2] = 1.0 + 5.0 * lam
    # rhs = lam * D'D x via two second-difference passes
    y = lam * np.diff(x, 2)
    rhs = np.zeros(n)
    rhs[:-2] += y
    rhs[1:-1] -= 2.0 * y
    rhs[2:] += y
    return x - solveh_banded(ab, rhs)


def hp_matrix(n: int, lam: float) -> np.ndarray:
    """Dense (I + lam*D'D) matrix; the oracle counterpart of hp_filter."""
    d = np.zeros((n - 2, n))
    for i in range(n - 2):
        d[i, i : i + 3] = (1.0, -2.0, 1.0)
    return np.eye(n) + lam * (d.T @ d)


def three_point_derivative(values, dt_years: float) -> np.ndarray:
    """Second-order derivative estimate on a uniform grid.

    Central differences at interior points, one-sided three-point rules at
    both endpoints; exact for quadratics.
    """
    m = np.asarray(values, dtype=float)
    n = m.size
    if n < 3:
        raise SizeError(f"three_point_derivative needs at least 3 points, got {n}")
    out = np.empty_like(m)
    h2 = 2.0 * dt_years
    out[1:-1] = (m[2:] - m[:-2]) / h2
    out[0] = (-3.0 * m[0] + 4.0 * m[1] - m[2]) / h2
    out[-1] = (3.0 * m[-1] - 4.0 * m[-2] + m[-3]) / h2
    return out


def estimate_trend(series: TimeSeries, lam: float = DEFAULT_LAMBDA) -> TrendEstimate:
    """HP trend of a series together with its per-year slope."""
    m = hp_filter(series.values, lam)
    m_dot = three_point_derivative(m, series.dt_years)
    return TrendEstimate(m=m, m_dot=m_dot, lam=lam)
