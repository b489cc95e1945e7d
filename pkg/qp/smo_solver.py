"""
SMO solver for the sliced support vector machine dual

    minimise    f(alpha) = -1'alpha + 1/4 alpha' M alpha
    subject to  0 <= alpha <= cost,  y'alpha = 0

with M = diag(y) P diag(y) symmetric PSD and y in {-1, +1}^m.

Each iteration picks the maximal violating pair (i, j), moves along the
direction that keeps y'alpha fixed, solves the one-dimensional problem exactly
and clips to the box. The violation reported everywhere is the pair gap

    max_{t in I_up} -y_t g_t  -  min_{t in I_low} -y_t g_t

which is twice the smallest achievable worst-coordinate stationarity residual
over the scalar multiplier of the equality constraint.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config.config import IS_DEBUG
from errors.errors import ArgumentError, ConvergenceError, DimensionError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
GRADIENT_REFRESH = 1000  # iterations between exact gradient recomputations


@dataclass(frozen=True)
class SvmDualProblem:
    M: np.ndarray
    y_tilde: np.ndarray
    cost: float

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        y = np.asarray(self.y_tilde, dtype=float).ravel()
        if M.ndim != 2 or M.shape != (y.size, y.size):
            raise DimensionError(f"M has shape {M.shape}, expected ({y.size}, {y.size})")
        if not np.all(np.abs(y) == 1.0):
            raise ArgumentError("slice labels must be +1 or -1")
        if not self.cost > 0:
            raise ArgumentError(f"cost must be positive, got {self.cost}")
        scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
        if M.size and float(np.max(np.abs(M - M.T))) > 1e-9 * scale:
            raise ArgumentError("M must be symmetric")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "y_tilde", y)
        object.__setattr__(self, "cost", float(self.cost))

    @classmethod
    def from_projection(cls, projection: np.ndarray, y_tilde, cost: float) -> "SvmDualProblem":
        """Build M = diag(y) P diag(y) from a projection (or Gram-type) matrix P."""
        y = np.asarray(y_tilde, dtype=float).ravel()
        return cls(M=projection * np.outer(y, y), y_tilde=y, cost=cost)

    @property
    def m(self) -> int:
        return self.y_tilde.size

    @property
    def single_class(self) -> bool:
        return bool(np.all(self.y_tilde == self.y_tilde[0])) if self.m else True

    def gradient(self, alpha: np.ndarray) -> np.ndarray:
        return 0.5 * (self.M @ alpha) - 1.0

    def objective(self, alpha: np.ndarray) -> float:
        return float(-np.sum(alpha) + 0.25 * alpha @ (self.M @ alpha))


@dataclass(frozen=True)
class SvmDualSolution:
    alpha: np.ndarray
    objective: float
    kkt_violation: float
    iterations: int


def _bound_masks(alpha: np.ndarray, cost: float) -> Tuple[np.ndarray, np.ndarray]:
    eps = 1e-12 * cost
    return alpha <= eps, alpha >= cost - eps


def _pair_gap(y: np.ndarray, alpha: np.ndarray, grad: np.ndarray, cost: float):
    at_lower, at_upper = _bound_masks(alpha, cost)
    score = -y * grad
    up = np.where(y > 0, ~at_upper, ~at_lower)
    low = np.where(y > 0, ~at_lower, ~at_upper)
    if not up.any() or not low.any():
        return None, None, 0.0
    up_scores = np.where(up, score, -np.inf)
    low_scores = np.where(low, score, np.inf)
    i = int(np.argmax(up_scores))
    j = int(np.argmin(low_scores))
    return i, j, max(float(up_scores[i] - low_scores[j]), 0.0)


def kkt_violation(problem: SvmDualProblem, alpha) -> float:
    alpha = np.asarray(alpha, dtype=float).ravel()
    if alpha.size != problem.m:
        raise DimensionError(f"alpha has length {alpha.size}, problem has {problem.m}")
    _, _, gap = _pair_gap(problem.y_tilde, alpha, problem.gradient(alpha), problem.cost)
    return gap


def solve_sliced_svm_dual(
    problem: SvmDualProblem,
    tol: float = DEFAULT_TOL,
    max_iter: Optional[int] = None,
    debug: bool = IS_DEBUG,
) -> SvmDualSolution:
    """
    Solve the sliced SVM dual by sequential minimal optimisation.

    Args:
        problem: the dual QP
        tol: stop when the maximal pair violation drops to tol
        max_iter: iteration cap, 100 * m**2 when omitted
        debug: assert that the objective never increases

    Returns:
        SvmDualSolution with the final alpha and its KKT violation

    Raises:
        ConvergenceError: iteration cap reached with violation above tol;
            the exception carries the best iterate
    """
    m = problem.m
    y = problem.y_tilde
    cost = problem.cost
    alpha = np.zeros(m)

    if m == 0 or problem.single_class:
        # y'alpha = 0 with alpha >= 0 forces alpha = 0
        return SvmDualSolution(alpha=alpha, objective=0.0, kkt_violation=0.0, iterations=0)

    max_iter = max_iter if max_iter is not None else 100 * m * m
    M = problem.M
    grad = -np.ones(m)
    previous = 0.0

    for iteration in range(1, max_iter + 1):
        i, j, gap = _pair_gap(y, alpha, grad, cost)
        if i is None or gap <= tol:
            # confirm against an exact gradient before declaring convergence
            grad = problem.gradient(alpha)
            i, j, gap = _pair_gap(y, alpha, grad, cost)
            if i is None or gap <= tol:
                return _finish(problem, alpha, iteration - 1)

        curvature = 0.5 * (M[i, i] + M[j, j] - 2.0 * y[i] * y[j] * M[i, j])
        step = gap / curvature if curvature > 0 else np.inf
        room_i = cost - alpha[i] if y[i] > 0 else alpha[i]
        room_j = alpha[j] if y[j] > 0 else cost - alpha[j]
        step = min(step, room_i, room_j)

        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        if step == room_i:
            alpha[i] = cost if y[i] > 0 else 0.0
        if step == room_j:
            alpha[j] = 0.0 if y[j] > 0 else cost
        np.clip(alpha, 0.0, cost, out=alpha)

        if iteration % GRADIENT_REFRESH == 0:
            grad = problem.gradient(alpha)
        else:
            grad += 0.5 * step * (y[i] * M[i] - y[j] * M[j])

        if debug:
            current = 0.5 * float(alpha @ (grad - 1.0))
            assert current <= previous + 1e-12 * (1.0 + abs(previous)), (
                f"objective increased from {previous!r} to {current!r} at iteration {iteration}"
            )
            previous = current

    best = _finish(problem, alpha, max_iter)
    if best.kkt_violation <= tol:
        return best
    logger.error(
        f"SMO stopped after {max_iter} iterations with KKT violation {best.kkt_violation:.3e} > {tol:.1e}"
    )
    raise ConvergenceError(
        f"SMO did not reach tolerance {tol:.1e} within {max_iter} iterations", best=best
    )


def _finish(problem: SvmDualProblem, alpha: np.ndarray, iterations: int) -> SvmDualSolution:
    alpha = alpha.copy()
    violation = kkt_violation(problem, alpha)
    logger.debug(f"SMO finished: m={problem.m}, iterations={iterations}, violation={violation:.3e}")
    return SvmDualSolution(
        alpha=alpha,
        objective=problem.objective(alpha),
        kkt_violation=violation,
        iterations=iterations,
    )
