import numpy as np
import pytest

from errors.errors import ArgumentError, DegenerateResponseError, DimensionError
from kernel_core.kernel_core import CenteredGram, build_centered_gram
from psvm.psvm import (
    SDRMap,
    column_moments,
    evaluate_summaries,
    evaluate_summary,
    fit_psvm,
    principal_directions,
    slice_response,
    standardize_columns,
    sv_coefficients,
)
from pydantic_models.models import KernelSpec, PsvmConfig, QpConfig

CONFIG = PsvmConfig(kernel=KernelSpec(gamma=0.1), k=10, h=4)


def training_pairs(rng, m=40, p=5):
    theta = rng.uniform(-1.0, 1.0, size=m)
    X = theta[:, None] * np.linspace(1.0, 2.0, p) + 0.3 * rng.normal(size=(m, p))
    return theta, X


def sine_between(a, b):
    a = a.ravel() / np.linalg.norm(a)
    b = b.ravel() / np.linalg.norm(b)
    return float(np.linalg.norm(a - (a @ b) * b))


class TestStandardize:
    def test_stored_moments(self):
        out = standardize_columns([[1.0], [2.0], [3.0]], [2.0], [1.0])
        np.testing.assert_array_equal(out.ravel(), [-1.0, 0.0, 1.0])

    def test_population_sd(self):
        means, sds = column_moments([[1.0], [2.0], [3.0]])
        assert means[0] == 2.0
        assert sds[0] == pytest.approx(np.sqrt(2.0 / 3.0))

    def test_constant_column_only_centered(self):
        data = np.array([[5.0, 1.0], [5.0, 2.0], [5.0, 4.0]])
        out = standardize_columns(data, *column_moments(data))
        np.testing.assert_array_equal(out[:, 0], np.zeros(3))

    def test_idempotent(self, rng):
        data = rng.normal(3.0, 2.0, size=(50, 4))
        once = standardize_columns(data, *column_moments(data))
        twice = standardize_columns(once, *column_moments(once))
        np.testing.assert_allclose(twice, once, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            standardize_columns(np.ones((3, 2)), [0.0], [1.0])


class TestSliceResponse:
    def test_two_slices(self):
        slices = slice_response([1.0, 2.0, 3.0, 4.0], 2)
        np.testing.assert_array_equal(slices.cut_points, [2.5])
        np.testing.assert_array_equal(slices.labels, [[1.0, 1.0, -1.0, -1.0]])

    def test_quartiles(self, rng):
        theta = rng.uniform(-1.0, 1.0, size=1000)
        slices = slice_response(theta, 4)
        assert slices.count == 3
        np.testing.assert_array_equal(slices.cut_points, np.quantile(theta, [0.25, 0.5, 0.75]))
        for cut, labels in zip(slices.cut_points, slices.labels):
            np.testing.assert_array_equal(labels, np.where(theta <= cut, 1.0, -1.0))

    def test_duplicates_collapse(self):
        slices = slice_response([1.0, 1.0, 1.0, 2.0], 4)
        assert slices.count < 3
        assert np.all(np.diff(slices.cut_points) > 0)

    def test_constant_response(self):
        with pytest.raises(DegenerateResponseError):
            slice_response(np.full(10, 0.7), 4)

    @pytest.mark.parametrize("theta,h", [([1.0, 2.0, 3.0], 1), ([1.0, 2.0], 3)])
    def test_bad_arguments(self, theta, h):
        with pytest.raises(ArgumentError):
            slice_response(theta, h)


class TestSvCoefficients:
    def test_zero_alpha(self, rng):
        psi, _ = np.linalg.qr(rng.normal(size=(6, 3)))
        np.testing.assert_array_equal(sv_coefficients(psi, np.ones(6), np.zeros(6)), np.zeros(3))

    def test_identity_basis(self):
        np.testing.assert_array_equal(sv_coefficients(np.eye(2), [1.0, -1.0], [2.0, 2.0]), [1.0, -1.0])

    def test_matches_general_formula(self, rng):
        psi, _ = np.linalg.qr(rng.normal(size=(8, 4)))
        y = rng.choice([-1.0, 1.0], size=8)
        alpha = rng.uniform(0.0, 1.0, size=8)
        np.testing.assert_allclose(
            sv_coefficients(psi, y, alpha),
            sv_coefficients(psi, y, alpha, assume_orthonormal=False),
            atol=1e-10,
        )


class TestPrincipalDirections:
    def test_single_slice(self, rng):
        c = rng.normal(size=5)
        directions = principal_directions(np.outer(c, c), 1)
        np.testing.assert_allclose(np.abs(directions.V[:, 0]), np.abs(c) / np.linalg.norm(c), atol=1e-12)
        assert not directions.flagged

    def test_orthogonal_pair_in_order(self, rng):
        q, _ = np.linalg.qr(rng.normal(size=(4, 2)))
        c1, c2 = 3.0 * q[:, 0], 2.0 * q[:, 1]
        directions = principal_directions(np.outer(c1, c1) + np.outer(c2, c2), 2)
        np.testing.assert_allclose(np.abs(directions.V.T @ q), np.eye(2), atol=1e-10)

    def test_rank_deficient_is_flagged(self, rng):
        c = rng.normal(size=4)
        directions = principal_directions(np.outer(c, c), 2)
        assert directions.flagged
        assert directions.V.shape == (4, 1)

    def test_d_exceeds_basis(self):
        with pytest.raises(ArgumentError):
            principal_directions(np.eye(2), 3)


class TestFitPsvm:
    def test_smallest_instance(self):
        sdr_map = fit_psvm([0.0, 1.0], [[0.0], [1.0]], PsvmConfig(h=2))
        assert sdr_map.k == 1 and sdr_map.d == 1
        assert abs(sdr_map.V[0, 0]) == pytest.approx(1.0)

    def test_directions_orthonormal(self, rng):
        theta, X = training_pairs(rng)
        sdr_map = fit_psvm(theta, X, CONFIG.model_copy(update={"d": 2}))
        np.testing.assert_allclose(sdr_map.V.T @ sdr_map.V, np.eye(2), atol=1e-10)
        assert np.all(sdr_map.gram.eigenvalues > 0)

    def test_refit_is_bit_identical(self, rng):
        theta, X = training_pairs(rng)
        first = fit_psvm(theta, X, CONFIG)
        second = fit_psvm(theta.copy(), X.copy(), CONFIG)
        np.testing.assert_array_equal(first.V, second.V)
        np.testing.assert_array_equal(first.training_summaries(), second.training_summaries())

    def test_thread_count_does_not_matter(self, rng):
        theta, X = training_pairs(rng)
        serial = fit_psvm(theta, X, CONFIG, threads=1)
        parallel = fit_psvm(theta, X, CONFIG, threads=4)
        np.testing.assert_array_equal(serial.V, parallel.V)

    @pytest.mark.parametrize("standardize", [False, True])
    def test_training_rows_reproduce_training_summaries(self, rng, standardize):
        theta, X = training_pairs(rng)
        sdr_map = fit_psvm(theta, X, CONFIG.model_copy(update={"standardize": standardize}))
        np.testing.assert_allclose(evaluate_summaries(sdr_map, X), sdr_map.training_summaries(), atol=1e-10)
        np.testing.assert_allclose(evaluate_summary(sdr_map, X[3]), sdr_map.training_summaries()[3], atol=1e-10)

    def test_eigen_floor_trims_the_basis(self, rng):
        theta, X = training_pairs(rng)
        full = fit_psvm(theta, X, CONFIG)
        trimmed = fit_psvm(theta, X, CONFIG.model_copy(update={"eigen_floor": 0.5}))
        assert not full.gram.truncated and full.k == 10
        assert trimmed.gram.truncated and trimmed.flagged
        assert 1 <= trimmed.k < 10
        assert np.all(trimmed.gram.eigenvalues > 0.5 * full.gram.eigenvalues[0])
        np.testing.assert_allclose(evaluate_summaries(trimmed, X), trimmed.training_summaries(), atol=1e-10)

    def test_permuting_training_pairs_keeps_the_subspace(self, rng):
        theta, X = training_pairs(rng)
        config = CONFIG.model_copy(update={"qp": QpConfig(tol=1e-12)})
        order = rng.permutation(theta.size)
        original = fit_psvm(theta, X, config)
        permuted = fit_psvm(theta[order], X[order], config)
        _, X_new = training_pairs(rng, m=15)
        assert sine_between(evaluate_summaries(original, X_new), evaluate_summaries(permuted, X_new)) <= 1e-6

    def test_summary_tracks_the_parameter(self, rng):
        theta, X = training_pairs(rng, m=80)
        sdr_map = fit_psvm(theta, X, PsvmConfig(kernel=KernelSpec(gamma=0.05), k=20, h=4))
        r = np.corrcoef(sdr_map.training_summaries()[:, 0], theta)[0, 1]
        assert abs(r) > 0.8

    def test_basis_larger_than_sample(self, rng):
        theta, X = training_pairs(rng)
        with pytest.raises(ArgumentError):
            fit_psvm(theta, X, PsvmConfig(k=50))

    def test_target_dimension_larger_than_default_basis(self, rng):
        theta, X = training_pairs(rng)
        with pytest.raises(ArgumentError):
            fit_psvm(theta, X, PsvmConfig(d=30))

    def test_length_mismatch(self, rng):
        theta, X = training_pairs(rng)
        with pytest.raises(DimensionError):
            fit_psvm(theta[:-1], X, CONFIG)


class TestEvaluateSummary:
    def test_hand_computed_linear_map(self):
        spec = KernelSpec(kind="linear")
        points = np.array([[-1.0], [0.0], [1.0]])
        centered = build_centered_gram(spec, points, k=1)
        np.testing.assert_allclose(centered.eigenvalues, [2.0])
        sdr_map = SDRMap(
            kernel=spec,
            training_points=points,
            col_means=np.zeros(1),
            col_sds=np.ones(1),
            gram=centered,
            V=np.array([[1.0]]),
        )
        # K(x, X) = (-2, 0, 2) at x = 2 and Psi = +-(1, 0, -1) / sqrt(2)
        expected = -np.sqrt(2.0) * np.sign(centered.psi[0, 0])
        assert evaluate_summary(sdr_map, [2.0])[0] == pytest.approx(expected, abs=1e-12)

    def test_identical_training_points_give_zero(self):
        sdr_map = SDRMap(
            kernel=KernelSpec(gamma=0.5),
            training_points=np.ones((3, 2)),
            col_means=np.zeros(2),
            col_sds=np.ones(2),
            gram=CenteredGram(
                K=np.ones((3, 3)),
                S=np.zeros((3, 3)),
                eigenvalues=np.array([1.0]),
                psi=np.full((3, 1), 1.0 / np.sqrt(3.0)),
            ),
            V=np.array([[1.0]]),
        )
        assert abs(evaluate_summary(sdr_map, [5.0, -2.0])[0]) <= 1e-12

    def test_dimension_mismatch(self, rng):
        theta, X = training_pairs(rng)
        sdr_map = fit_psvm(theta, X, CONFIG)
        with pytest.raises(DimensionError):
            evaluate_summary(sdr_map, np.zeros(4))
        with pytest.raises(DimensionError):
            evaluate_summaries(sdr_map, np.zeros((2, 6)))
