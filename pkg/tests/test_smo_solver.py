import itertools

import numpy as np
import pytest

from errors.errors import ArgumentError, ConvergenceError, DimensionError
from qp.smo_solver import SvmDualProblem, kkt_violation, solve_sliced_svm_dual


def two_point(cost):
    return SvmDualProblem(M=np.eye(2), y_tilde=[1.0, -1.0], cost=cost)


def brute_force_objective(problem: SvmDualProblem) -> float:
    """Minimum over every lower / upper / free pattern of the reduced KKT system."""
    M, y, cost, m = problem.M, problem.y_tilde, problem.cost, problem.m
    best = np.inf
    for pattern in itertools.product((0, 1, 2), repeat=m):
        pattern = np.array(pattern)
        free = pattern == 2
        alpha = np.where(pattern == 1, cost, 0.0)
        if free.any():
            f = np.flatnonzero(free)
            fixed = ~free
            size = f.size
            system = np.zeros((size + 1, size + 1))
            system[:size, :size] = 0.5 * M[np.ix_(f, f)]
            system[:size, size] = y[f]
            system[size, :size] = y[f]
            rhs = np.empty(size + 1)
            rhs[:size] = 1.0 - 0.5 * M[np.ix_(f, np.flatnonzero(fixed))] @ alpha[fixed]
            rhs[size] = -y[fixed] @ alpha[fixed]
            solution = np.linalg.lstsq(system, rhs, rcond=None)[0]
            if np.max(np.abs(system @ solution - rhs)) > 1e-9:
                continue
            alpha[f] = solution[:size]
        if np.any(alpha < -1e-12) or np.any(alpha > cost + 1e-12) or abs(y @ alpha) > 1e-9:
            continue
        best = min(best, problem.objective(np.clip(alpha, 0.0, cost)))
    return best


class TestProblem:
    def test_labels_must_be_signs(self):
        with pytest.raises(ArgumentError):
            SvmDualProblem(M=np.eye(2), y_tilde=[1.0, 0.5], cost=1.0)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            SvmDualProblem(M=np.eye(3), y_tilde=[1.0, -1.0], cost=1.0)

    def test_asymmetric(self):
        with pytest.raises(ArgumentError):
            SvmDualProblem(M=np.array([[1.0, 0.5], [0.0, 1.0]]), y_tilde=[1.0, -1.0], cost=1.0)

    @pytest.mark.parametrize("cost", [0.0, -1.0])
    def test_cost_positive(self, cost):
        with pytest.raises(ArgumentError):
            two_point(cost)

    def test_from_projection(self):
        P = np.array([[2.0, 1.0], [1.0, 3.0]])
        problem = SvmDualProblem.from_projection(P, [1.0, -1.0], 1.0)
        np.testing.assert_array_equal(problem.M, [[2.0, -1.0], [-1.0, 3.0]])


class TestSolve:
    def test_single_class(self):
        problem = SvmDualProblem(M=np.eye(3), y_tilde=[1.0, 1.0, 1.0], cost=1.0)
        solution = solve_sliced_svm_dual(problem)
        np.testing.assert_array_equal(solution.alpha, np.zeros(3))
        assert solution.objective == 0.0
        assert solution.iterations == 0

    def test_two_points_interior(self):
        solution = solve_sliced_svm_dual(two_point(10.0))
        np.testing.assert_allclose(solution.alpha, [2.0, 2.0], atol=1e-12)
        assert solution.objective == pytest.approx(-2.0, abs=1e-12)

    def test_two_points_box_clipped(self):
        solution = solve_sliced_svm_dual(two_point(1.0))
        np.testing.assert_allclose(solution.alpha, [1.0, 1.0], atol=1e-12)

    def test_zero_curvature_goes_to_the_box(self):
        problem = SvmDualProblem(M=np.zeros((2, 2)), y_tilde=[1.0, -1.0], cost=3.0)
        solution = solve_sliced_svm_dual(problem)
        np.testing.assert_allclose(solution.alpha, [3.0, 3.0])

    def test_gives_up_with_best_iterate(self):
        problem = SvmDualProblem(M=np.eye(4), y_tilde=[1.0, 1.0, -1.0, -1.0], cost=10.0)
        with pytest.raises(ConvergenceError) as caught:
            solve_sliced_svm_dual(problem, max_iter=1)
        best = caught.value.best
        assert best.iterations == 1
        assert best.kkt_violation > 1e-8
        assert abs(problem.y_tilde @ best.alpha) <= 1e-12

    def test_matches_brute_force(self, rng):
        for _ in range(200):
            m = int(rng.integers(2, 7))
            rank = int(rng.integers(1, m + 1))
            A = rng.normal(size=(m, rank))
            y = rng.choice([-1.0, 1.0], size=m)
            cost = float(rng.choice([0.5, 1.0, 10.0]))
            problem = SvmDualProblem(M=A @ A.T, y_tilde=y, cost=cost)
            solution = solve_sliced_svm_dual(problem)

            alpha = solution.alpha
            assert np.all(alpha >= 0.0) and np.all(alpha <= cost)
            assert abs(y @ alpha) <= 1e-8 * m * cost
            assert solution.kkt_violation <= 1e-8
            assert solution.objective == pytest.approx(brute_force_objective(problem), abs=1e-6)

    def test_objective_monotone_in_debug_mode(self, rng):
        for _ in range(20):
            m = 12
            A = rng.normal(size=(m, 4))
            y = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
            problem = SvmDualProblem(M=A @ A.T, y_tilde=y, cost=1.0)
            solve_sliced_svm_dual(problem, debug=True)

    @pytest.mark.parametrize("scale", [0.5, 2.0, 10.0])
    def test_scaling_covariance(self, scale):
        y = [1.0, 1.0, -1.0, -1.0]
        base = solve_sliced_svm_dual(SvmDualProblem(M=np.eye(4), y_tilde=y, cost=100.0))
        scaled = solve_sliced_svm_dual(SvmDualProblem(M=scale * np.eye(4), y_tilde=y, cost=100.0))
        np.testing.assert_allclose(scaled.alpha, base.alpha / scale, rtol=1e-10)


class TestKktViolation:
    def test_at_solution(self):
        assert kkt_violation(two_point(10.0), [2.0, 2.0]) <= 1e-10

    def test_at_zero(self):
        assert kkt_violation(two_point(10.0), [0.0, 0.0]) == pytest.approx(2.0)

    def test_zero_matrix_interior_point(self):
        problem = SvmDualProblem(M=np.zeros((2, 2)), y_tilde=[1.0, -1.0], cost=1.0)
        assert kkt_violation(problem, [0.5, 0.5]) == pytest.approx(2.0)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            kkt_violation(two_point(1.0), [0.0])
