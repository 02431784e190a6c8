import numpy as np
import pytest

from hydrocast import SizeError, estimate_trend, hp_filter, three_point_derivative
from hydrocast.estimation import HarmonicModel, SDEParams, evaluate_mu
from hydrocast.fixtures import FixtureSpec, generate
from hydrocast.trend import hp_matrix


class TestHPFilter:
    @pytest.mark.parametrize("lam", [1.0, 40000.0, 1e7])
    def test_linear_is_fixed_point(self, lam):
        x = 2.5 + 0.01 * np.arange(300)
        assert np.max(np.abs(hp_filter(x, lam) - x)) < 1e-9

    def test_constant_is_fixed_point(self):
        x = np.full(50, 7.4)
        assert np.array_equal(hp_filter(x, 40000.0), x)

    def test_matches_dense_solve_on_noisy_sinusoid(self):
        rng = np.random.default_rng(11)
        n = 200
        x = np.sin(np.linspace(0, 6 * np.pi, n)) + 0.3 * rng.standard_normal(n)
        dense = np.linalg.solve(hp_matrix(n, 40000.0), x)
        assert np.max(np.abs(hp_filter(x, 40000.0) - dense)) < 1e-8

    @pytest.mark.parametrize("lam", [100.0, 40000.0, 1e7])
    def test_matches_dense_solve_random(self, lam):
        rng = np.random.default_rng(int(lam) % 997)
        for _ in range(50):
            n = int(rng.integers(4, 501))
            x = rng.standard_normal(n)
            dense = np.linalg.solve(hp_matrix(n, lam), x)
            assert np.max(np.abs(hp_filter(x, lam) - dense)) < 1e-8

    def test_lambda_to_zero_returns_input(self):
        i = np.arange(365)
        x = (
            7.39
            + 0.29 * np.cos(2 * np.pi * 3 * i / 1095 - 2.77)
            + 0.22 * np.cos(2 * np.pi * 6 * i / 1095 + 2.82)
        )
        assert np.max(np.abs(hp_filter(x, 1e-8) - x)) < 1e-8

    def test_linearity(self):
        rng = np.random.default_rng(17)
        x = rng.standard_normal(120)
        y = rng.standard_normal(120)
        a, b = 2.5, -1.25
        combined = hp_filter(a * x + b * y, 40000.0)
        separate = a * hp_filter(x, 40000.0) + b * hp_filter(y, 40000.0)
        assert np.max(np.abs(combined - separate)) < 1e-9

    def test_preserves_mean(self):
        rng = np.random.default_rng(19)
        x = 5.0 + rng.standard_normal(400)
        assert hp_filter(x, 40000.0).mean() == pytest.approx(x.mean(), abs=1e-9)

    def test_huge_lambda_approaches_least_squares_line(self):
        rng = np.random.default_rng(37)
        x = 3.0 + 0.02 * np.arange(250) + rng.standard_normal(250)
        i = np.arange(250)
        slope, intercept = np.polyfit(i, x, 1)
        line = intercept + slope * i
        gaps = [
            float(np.max(np.abs(hp_filter(x, lam) - line)))
            for lam in (4e4, 1e7, 1e10)
        ]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-3

    def test_too_short(self):
        with pytest.raises(SizeError):
            hp_filter(np.ones(3), 100.0)


class TestThreePointDerivative:
    def test_exact_on_quadratic(self):
        dt = 0.1
        i = np.arange(30)
        m = (i * dt) ** 2
        expected = 2 * i * dt
        assert np.max(np.abs(three_point_derivative(m, dt) - expected)) < 1e-12

    def test_constant_is_zero(self):
        deriv = three_point_derivative(np.full(10, 3.3), 0.01)
        assert np.max(np.abs(deriv)) < 1e-11

    def test_sine_oracle(self):
        dt = 1.0 / 365.0
        i = np.arange(365)
        m = np.sin(2 * np.pi * i * dt)
        expected = 2 * np.pi * np.cos(2 * np.pi * i * dt)
        assert np.max(np.abs(three_point_derivative(m, dt) - expected)) < 1e-3

    def test_too_short(self):
        with pytest.raises(SizeError):
            three_point_derivative(np.ones(2), 0.1)


class TestEstimateTrend:
    def test_linear_series(self, make_series):
        slope_per_day = 0.002
        series = make_series(7.0 + slope_per_day * np.arange(200))
        trend = estimate_trend(series, 40000.0)
        assert np.max(np.abs(trend.m - series.values)) < 1e-9
        # slope per year = slope per sample / dt
        expected = slope_per_day / series.dt_years
        assert trend.m_dot == pytest.approx(np.full(200, expected), rel=1e-6)

    def test_constant_series(self, make_series):
        series = make_series(np.full(100, 7.4))
        trend = estimate_trend(series)
        assert np.max(np.abs(trend.m - 7.4)) < 1e-10
        assert np.max(np.abs(trend.m_dot)) < 1e-7

    def test_tracks_true_level_of_periodic_process(self):
        """On synthetic data the trend should stay inside a 2*sigma/sqrt(n)
        band of the true reversion level at 90% of interior points."""
        harmonics = HarmonicModel(
            base_period_years=3.0,
            n_samples=1095,
            terms=((0, 7.39, 0.0), (3, 0.29, -2.77), (6, 0.22, 2.82)),
        )
        spec = FixtureSpec(
            params=SDEParams(alpha=112.0, sigma=3.0),
            harmonics=harmonics,
            n_steps=1094,
            h0=7.39,
            seed=23,
        )
        series, _ = generate(spec)
        trend = estimate_trend(series, 40000.0)
        mu_true = evaluate_mu(harmonics, np.arange(len(series)))
        band = 2.0 * 3.0 / np.sqrt(len(series))
        interior = slice(55, -55)  # one smoothing bandwidth off each end
        frac = np.mean(np.abs(trend.m - mu_true)[interior] < band)
        assert frac >= 0.90
