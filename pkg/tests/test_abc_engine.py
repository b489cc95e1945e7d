import math

import numpy as np
import pytest
from pydantic import ValidationError

from abc_engine.abc_engine import (
    run_abc,
    run_rejection_abc,
    select_accepted,
    simulate_draws,
    summary_distance,
    summary_distances,
)
from abc_engine.export import samples_frame
from abc_engine.priors import uniform_prior
from abc_engine.streams import draw_stream
from errors.errors import ArgumentError, DimensionError, InferenceError
from models.ar1 import ar1_mle, simulate_ar1
from models.model_spec import build_model
from pydantic_models.models import ABCConfig, AcceptanceRule, KernelSpec, PsvmConfig

N_OBS = 20


@pytest.fixture
def ar1_setup():
    model = build_model("ar1", sigma=0.5, y1=1.0)
    prior = uniform_prior(-1.0, 1.0)
    observed = simulate_ar1(0.6, N_OBS, 0.5, 1.0, draw_stream(99, "observed"))
    return model, prior, observed


def small_config(**updates) -> ABCConfig:
    config = ABCConfig(
        n_prior=60,
        n_obs=N_OBS,
        accept=AcceptanceRule(quantile=0.1),
        psvm=PsvmConfig(kernel=KernelSpec(gamma=0.05), k=10, h=4),
        seed=7,
    )
    return config.model_copy(update=updates)


class TestSelectAccepted:
    def test_single_smallest(self):
        np.testing.assert_array_equal(select_accepted([3.0, 1.0, 2.0], AcceptanceRule(quantile=1 / 3)).indices, [1])

    def test_ties_go_to_the_smaller_index(self):
        np.testing.assert_array_equal(select_accepted([1.0, 1.0, 2.0], AcceptanceRule(quantile=1 / 3)).indices, [0])

    def test_infinite_epsilon_accepts_everything(self):
        selection = select_accepted([5.0, 0.0, 1e9], AcceptanceRule(epsilon=float("inf")))
        np.testing.assert_array_equal(selection.indices, [0, 1, 2])
        assert selection.warning is None

    def test_empty_epsilon_acceptance_warns(self):
        selection = select_accepted([5.0, 3.0], AcceptanceRule(epsilon=1.0))
        assert selection.indices.size == 0
        assert "accepted none" in selection.warning

    def test_quantile_one_accepts_everything(self, rng):
        assert select_accepted(rng.random(17), AcceptanceRule(quantile=1.0)).indices.size == 17

    @pytest.mark.parametrize("q", [0.01, 0.1, 0.25, 0.333, 0.5, 0.9])
    def test_count_is_ceiling(self, rng, q):
        distances = rng.random(101)
        selection = select_accepted(distances, AcceptanceRule(quantile=q))
        assert selection.indices.size == math.ceil(q * 101)
        accepted = np.zeros(101, dtype=bool)
        accepted[selection.indices] = True
        assert distances[accepted].max() <= distances[~accepted].min()

    def test_monotone_in_quantile(self, rng):
        distances = rng.integers(0, 20, size=200).astype(float)
        previous = set()
        for q in np.linspace(0.05, 1.0, 20):
            current = set(select_accepted(distances, AcceptanceRule(quantile=q)).indices.tolist())
            assert previous <= current
            previous = current

    def test_exchangeable(self, rng):
        thetas = rng.normal(size=50)
        distances = rng.random(50)
        rule = AcceptanceRule(quantile=0.2)
        order = rng.permutation(50)
        original = np.sort(thetas[select_accepted(distances, rule).indices])
        permuted = np.sort(thetas[order][select_accepted(distances[order], rule).indices])
        np.testing.assert_array_equal(original, permuted)

    def test_non_finite_distances(self):
        with pytest.raises(ArgumentError):
            select_accepted([1.0, np.nan], AcceptanceRule(quantile=0.5))

    def test_rule_needs_exactly_one_threshold(self):
        with pytest.raises(ValidationError):
            AcceptanceRule(quantile=0.1, epsilon=1.0)
        assert AcceptanceRule().quantile == 0.10


class TestSummaryDistance:
    def test_identical(self, rng):
        a = rng.normal(size=3)
        assert summary_distance(a, a) == 0.0

    def test_euclidean(self):
        assert summary_distance([2.0], [5.0]) == 3.0

    def test_scales_divide(self):
        unit = summary_distance([2.0], [5.0], "standardized_euclidean", [1.0])
        doubled = summary_distance([2.0], [5.0], "standardized_euclidean", [2.0])
        assert doubled == pytest.approx(unit / 2.0)

    def test_zero_scale_component_dropped(self):
        assert summary_distance([1.0, 7.0], [4.0, -3.0], "standardized_euclidean", [1.0, 0.0]) == 3.0

    @pytest.mark.parametrize("metric", ["euclidean", "standardized_euclidean"])
    def test_centering_invariance(self, rng, metric):
        summaries = rng.normal(size=(40, 3))
        s_obs = rng.normal(size=3)
        shift = rng.normal(size=3) * 10
        scales = summaries.std(axis=0)
        np.testing.assert_allclose(
            summary_distances(summaries + shift, s_obs + shift, metric, scales),
            summary_distances(summaries, s_obs, metric, scales),
            atol=1e-12,
        )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            summary_distance([1.0, 2.0], [1.0])

    def test_standardized_needs_scales(self):
        with pytest.raises(ArgumentError):
            summary_distances(np.zeros((2, 1)), [0.0], "standardized_euclidean")


class TestRunAbc:
    def test_quantile_rule(self, ar1_setup):
        result = run_abc(*ar1_setup, small_config())
        assert result.accepted.size == 6
        assert result.summaries.shape == (60, 1)
        assert result.distances[result.accepted_mask].max() <= result.distances[~result.accepted_mask].min()
        assert result.manifest["acceptance"] == "quantile=0.1"
        assert result.sdr_map is not None

    def test_quantile_one_returns_the_prior_sample(self, ar1_setup):
        result = run_abc(*ar1_setup, small_config(accept=AcceptanceRule(quantile=1.0)))
        np.testing.assert_array_equal(result.accepted_thetas, result.thetas)

    def test_thread_count_does_not_matter(self, ar1_setup):
        serial = run_abc(*ar1_setup, small_config(), threads=1)
        parallel = run_abc(*ar1_setup, small_config(), threads=4)
        for name in ("thetas", "summaries", "s_obs", "distances", "accepted", "datasets"):
            np.testing.assert_array_equal(getattr(serial, name), getattr(parallel, name))
        assert samples_frame(serial).equals(samples_frame(parallel))

    def test_fresh_batch(self, ar1_setup):
        reused = run_abc(*ar1_setup, small_config())
        fresh = run_abc(*ar1_setup, small_config(reuse_training=False))
        assert fresh.thetas.shape == reused.thetas.shape
        assert not np.array_equal(fresh.thetas, reused.thetas)
        np.testing.assert_array_equal(fresh.s_obs, reused.s_obs)

    def test_observed_length_checked(self, ar1_setup):
        model, prior, observed = ar1_setup
        with pytest.raises(DimensionError):
            run_abc(model, prior, observed[:-1], small_config())

    def test_samples_frame_columns(self, ar1_setup):
        frame = samples_frame(run_abc(*ar1_setup, small_config()))
        assert list(frame.columns) == ["index", "theta", "summary_1", "distance", "accepted"]
        assert frame["accepted"].sum() == 6


class TestRejectionAbc:
    def test_prior_mean_under_full_acceptance(self):
        model = build_model("ar1")
        prior = uniform_prior(-1.0, 1.0)
        config = ABCConfig(n_prior=10_000, n_obs=2, accept=AcceptanceRule(quantile=1.0), seed=3)
        result = run_rejection_abc(model, prior, [1.0, 0.5], lambda data: data[1], config)
        standard_error = np.sqrt(1.0 / 3.0) / np.sqrt(10_000)
        assert abs(np.mean(result.accepted_thetas)) <= 3 * standard_error

    def test_mle_summary(self, ar1_setup):
        result = run_rejection_abc(*ar1_setup, ar1_mle, small_config())
        assert result.manifest["summary"] == "ar1_mle"
        assert result.accepted.size == 6
        mles = np.array([ar1_mle(row) for row in result.datasets])
        np.testing.assert_array_equal(result.summaries[:, 0], mles)

    def test_constant_summary_is_degenerate(self, ar1_setup):
        with pytest.raises(InferenceError):
            run_rejection_abc(*ar1_setup, lambda data: 1.0, small_config())


def test_simulate_draws_lengths(ar1_setup):
    model, prior, _ = ar1_setup
    thetas, datasets = simulate_draws(model, prior, 15, 12, seed=1)
    assert thetas.shape == (12,)
    assert datasets.shape == (12, 15)
    assert np.all(datasets[:, 0] == 1.0)
