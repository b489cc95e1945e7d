import numpy as np
import pytest

from abc_engine.streams import draw_stream
from errors.errors import ArgumentError, DegenerateDataError
from models.ar1 import (
    ar1_log_likelihood,
    ar1_mle,
    ar1_reference_posterior,
    ar1_stated_posterior,
    ar1_truncated_normal_posterior,
    lag_products,
    simulate_ar1,
)
from models.model_spec import build_model, registered_models


class TestSimulate:
    def test_noiseless_recursion(self):
        series = simulate_ar1(0.5, 3, 0.0, 1.0, draw_stream(1, "observed"))
        np.testing.assert_array_equal(series, [1.0, 0.5, 0.25])

    def test_white_noise_variance(self):
        series = simulate_ar1(0.0, 20_001, 0.5, 1.0, draw_stream(2, "observed"))
        assert np.var(series[1:]) == pytest.approx(0.25, abs=0.01)

    def test_same_stream_same_series(self):
        first = simulate_ar1(0.6, 50, 0.5, 1.0, draw_stream(3, "training", 4))
        second = simulate_ar1(0.6, 50, 0.5, 1.0, draw_stream(3, "training", 4))
        np.testing.assert_array_equal(first, second)

    def test_too_short(self):
        with pytest.raises(ArgumentError):
            simulate_ar1(0.5, 1, 0.5, 1.0, draw_stream(1, "observed"))

    def test_registered(self):
        assert "ar1" in registered_models()
        model = build_model("ar1", sigma=0.0, y1=2.0)
        np.testing.assert_array_equal(model.draw(0.5, 3, draw_stream(1, "training")), [2.0, 1.0, 0.5])


class TestMle:
    def test_noiseless_series(self):
        assert ar1_mle([1.0, 0.5, 0.25]) == 0.5

    def test_single_transition(self):
        assert ar1_mle([1.0, 2.0]) == 2.0

    def test_consistency(self):
        estimates = [
            ar1_mle(simulate_ar1(0.6, 1000, 0.5, 1.0, draw_stream(10, "replication", i))) for i in range(200)
        ]
        assert np.mean(estimates) == pytest.approx(0.6, abs=0.01)

    def test_zero_denominator(self):
        with pytest.raises(DegenerateDataError):
            ar1_mle([0.0, 0.0, 1.0])

    def test_lag_products(self):
        assert lag_products([1.0, 2.0, 3.0]) == (8.0, 5.0, 13.0)

    def test_log_likelihood_peaks_at_mle(self):
        series = simulate_ar1(0.6, 100, 0.5, 1.0, draw_stream(4, "observed"))
        grid = np.linspace(-1.0, 1.0, 2001)
        values = ar1_log_likelihood(grid, series, 0.5)
        assert grid[np.argmax(values)] == pytest.approx(ar1_mle(series), abs=1e-3)


class TestReferencePosterior:
    def test_symmetric_around_the_estimate(self):
        posterior = ar1_reference_posterior([1.0, 0.5], 0.5, low=-3.0, high=4.0)
        np.testing.assert_allclose(posterior.density, posterior.density[::-1], atol=1e-10)
        assert posterior.mean() == pytest.approx(0.5, abs=1e-9)

    def test_matches_truncated_normal(self):
        series = simulate_ar1(0.6, 100, 0.5, 1.0, draw_stream(5, "observed"))
        posterior = ar1_reference_posterior(series, 0.5)
        exact = ar1_truncated_normal_posterior(series, 0.5)
        assert posterior.mean() == pytest.approx(exact.mean(), abs=1e-6)
        assert posterior.sd() == pytest.approx(exact.std(), abs=1e-6)
        np.testing.assert_allclose(posterior.density, exact.pdf(posterior.grid), rtol=1e-5, atol=1e-8)

    def test_huge_noise_gives_flat_posterior(self):
        series = simulate_ar1(0.6, 100, 0.5, 1.0, draw_stream(6, "observed"))
        posterior = ar1_reference_posterior(series, 1e3)
        np.testing.assert_allclose(posterior.density, 0.5, rtol=1e-3)

    def test_empty_support(self):
        with pytest.raises(ArgumentError):
            ar1_reference_posterior([1.0, 0.5], 0.5, low=1.0, high=1.0)

    def test_truncated_normal_needs_variation(self):
        with pytest.raises(DegenerateDataError):
            ar1_truncated_normal_posterior([0.0, 0.0], 0.5)

    def test_stated_posterior(self):
        stated = ar1_stated_posterior([1.0, 0.5])
        assert stated.mean() == pytest.approx(0.25)
        assert stated.std() == pytest.approx(np.sqrt(0.5))
