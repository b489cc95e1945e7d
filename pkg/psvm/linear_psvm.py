"""
Linear principal support vector machine.

Per slice s the normal vector psi_s minimises the empirical mean of

    psi' Sigma psi + cost * (1 - y (psi'(x - xbar) - t))^+

with Sigma the sample covariance. Its dual is the same box-and-one-equality QP
as the kernel version with P = X~ Sigma^-1 X~' / m, and
psi_s = 1/2 Sigma^-1 X~' (y * a) / m. The directions are the top-d eigenvectors
of sum_s psi_s psi_s', reported in the original coordinates.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from errors.errors import ArgumentError, DimensionError, FitError
from kernel_core.kernel_core import as_points, symmetric_eigen
from psvm.psvm import ZERO_SD, column_moments, labels_for_cuts, slice_response, standardize_columns
from pydantic_models.models import LinearPsvmConfig
from qp.smo_solver import SvmDualProblem, solve_sliced_svm_dual

logger = logging.getLogger(__name__)

# leading eigenvalue share below which no stable direction is reported
NULL_CONCENTRATION = 0.9
# a slice normal shorter than this fraction of the longest one counts as degenerate
DEGENERATE_NORMAL = 1e-6
# at least this share of the fitted slices must carry a non-degenerate normal
MIN_ACTIVE_SHARE = 0.5
COVARIANCE_FLOOR = 1e-10
COVARIANCE_RIDGE = 1e-8


@dataclass(frozen=True)
class LinearPsvmResult:
    directions: np.ndarray  # p x d, unit columns in the original coordinates
    eigenvalues: np.ndarray
    normals: np.ndarray  # slices x p
    offsets: np.ndarray
    cut_points: np.ndarray
    concentration: float
    active_slices: int  # slices whose normal is not degenerate
    flagged: bool

    @property
    def leading(self) -> np.ndarray:
        return self.directions[:, 0]


def regularized_covariance(centered: np.ndarray) -> np.ndarray:
    m, p = centered.shape
    sigma = centered.T @ centered / m
    trace = float(np.trace(sigma))
    if trace <= 0:
        raise FitError("predictors have zero total variance")
    if float(symmetric_eigen(sigma).values[-1]) < COVARIANCE_FLOOR * trace:
        logger.warning("Sample covariance is near singular; adding a ridge of 1e-8 * trace / p")
        sigma = sigma + COVARIANCE_RIDGE * trace / p * np.eye(p)
    return sigma


def _slice_offset(scores: np.ndarray, labels: np.ndarray, alpha: np.ndarray, cost: float) -> float:
    free = (alpha > 1e-9 * cost) & (alpha < cost * (1.0 - 1e-9))
    if free.any():
        return float(np.mean(scores[free] - labels[free]))
    # no margin support vectors: split the gap between the classes
    return 0.5 * float(scores[labels > 0].min() + scores[labels < 0].max())


def fit_linear_psvm(
    theta, X, config: Optional[LinearPsvmConfig] = None, threads: int = 1
) -> LinearPsvmResult:
    config = config or LinearPsvmConfig()
    theta = np.asarray(theta, dtype=float).ravel()
    X = as_points(X)
    m, p = X.shape
    if theta.size != m:
        raise DimensionError(f"{theta.size} responses for {m} predictor rows")
    if config.d > p:
        raise ArgumentError(f"target dimension d={config.d} exceeds predictor dimension {p}")

    means, sds = column_moments(X)
    if config.standardize:
        Z = standardize_columns(X, means, sds)
    else:
        Z = X - means
    sigma = regularized_covariance(Z)
    try:
        sigma_inv_zt = np.linalg.solve(sigma, Z.T)  # p x m
    except np.linalg.LinAlgError as e:
        raise FitError(f"predictor covariance is singular: {e}") from e
    projection = Z @ sigma_inv_zt / m
    projection = 0.5 * (projection + projection.T)

    if config.cut_points:
        slices = labels_for_cuts(theta, sorted(set(config.cut_points)))
    else:
        if m < config.h:
            raise ArgumentError(f"{m} responses cannot fill {config.h} slices")
        slices = slice_response(theta, config.h)

    def solve(s: int):
        labels = slices.labels[s]
        problem = SvmDualProblem.from_projection(projection, labels, config.cost)
        if problem.single_class:
            logger.warning(f"Slice at cut {slices.cut_points[s]:.6g} holds one class; skipped")
            return None
        solution = solve_sliced_svm_dual(problem, tol=config.qp.tol, max_iter=config.qp.max_iter)
        normal = 0.5 * sigma_inv_zt @ (labels * solution.alpha) / m
        offset = _slice_offset(Z @ normal, labels, solution.alpha, config.cost)
        return normal, offset

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        fitted = [result for result in pool.map(solve, range(slices.count)) if result is not None]
    if not fitted:
        raise FitError("every slice holds a single class")

    normals = np.array([normal for normal, _ in fitted])
    offsets = np.array([offset for _, offset in fitted])
    if config.standardize:
        normals = normals / np.where(sds > ZERO_SD, sds, 1.0)

    lengths = np.linalg.norm(normals, axis=1)
    if lengths.max() <= 0:
        raise FitError("slice normal vectors are all zero")
    active = int(np.sum(lengths > DEGENERATE_NORMAL * lengths.max()))

    pairs = symmetric_eigen(normals.T @ normals)
    trace = float(np.sum(pairs.values))
    directions = pairs.vectors[:, : config.d]
    concentration = float(pairs.values[0] / trace)
    # with most slices at a zero normal the leading direction rests on a single fit
    flagged = concentration < NULL_CONCENTRATION or active < MIN_ACTIVE_SHARE * len(fitted)
    if flagged:
        logger.warning(
            f"Leading eigenvalue carries {concentration:.3f} of the trace with {active} of "
            f"{len(fitted)} slices active; no stable direction"
        )
    logger.info(
        f"Linear PSVM fitted: m={m}, p={p}, slices={len(fitted)}, concentration={concentration:.4f}"
    )
    return LinearPsvmResult(
        directions=directions,
        eigenvalues=pairs.values[: config.d],
        normals=normals,
        offsets=offsets,
        cut_points=slices.cut_points,
        concentration=concentration,
        active_slices=active,
        flagged=flagged,
    )
