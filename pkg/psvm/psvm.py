"""
Kernel principal support vector machine.

fit_psvm learns a map phi: R^p -> R^d from (theta_i, X_i) pairs by
  1. optionally standardising the columns of X,
  2. taking the top-k eigenbasis (Psi, lambda) of the centered Gram matrix QKQ,
  3. solving one sliced SVM dual per cut point of theta,
  4. running PCA on the support-vector coefficients c_s,
and evaluate_summary applies phi(x) = V' diag(lambda)^-1 Psi' K(x, X).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from errors.errors import (
    ArgumentError,
    DegenerateResponseError,
    DimensionError,
    FitError,
)
from kernel_core.kernel_core import (
    CenteredGram,
    EigenSolver,
    as_points,
    build_centered_gram,
    cross_gram,
    top_k_eigen,
)
from pydantic_models.models import KernelSpec, PsvmConfig
from qp.smo_solver import SvmDualProblem, solve_sliced_svm_dual

logger = logging.getLogger(__name__)

ZERO_SD = 1e-12


@dataclass(frozen=True)
class SliceSet:
    cut_points: np.ndarray
    labels: np.ndarray  # (slices, m), +1 where theta <= cut

    @property
    def count(self) -> int:
        return self.cut_points.shape[0]


class Directions(NamedTuple):
    V: np.ndarray
    eigenvalues: np.ndarray
    flagged: bool  # fewer than d directions carried positive weight


@dataclass(frozen=True)
class SDRMap:
    kernel: KernelSpec
    training_points: np.ndarray  # standardised rows that built the Gram matrix
    col_means: np.ndarray
    col_sds: np.ndarray
    gram: CenteredGram
    V: np.ndarray
    flagged: bool = False

    @property
    def d(self) -> int:
        return self.V.shape[1]

    @property
    def k(self) -> int:
        return self.gram.k

    @property
    def n_train(self) -> int:
        return self.training_points.shape[0]

    @property
    def dim(self) -> int:
        return self.training_points.shape[1]

    def training_summaries(self) -> np.ndarray:
        return _summaries_from_standardized(self, self.training_points)


def column_moments(data) -> Tuple[np.ndarray, np.ndarray]:
    data = as_points(data)
    return data.mean(axis=0), data.std(axis=0)


def standardize_columns(data, col_means, col_sds) -> np.ndarray:
    """Subtract the stored means and divide by the stored sds; near-constant columns are only centered."""
    data = np.asarray(data, dtype=float)
    col_means = np.asarray(col_means, dtype=float)
    col_sds = np.asarray(col_sds, dtype=float)
    if data.shape[-1] != col_means.shape[0] or col_means.shape != col_sds.shape:
        raise DimensionError(
            f"data has {data.shape[-1]} columns, moments have {col_means.shape[0]}"
        )
    divisor = np.where(col_sds > ZERO_SD, col_sds, 1.0)
    return (data - col_means) / divisor


def slice_response(theta, h: int) -> SliceSet:
    theta = np.asarray(theta, dtype=float).ravel()
    if h < 2:
        raise ArgumentError(f"need at least two slices, got h={h}")
    if theta.size < h:
        raise ArgumentError(f"{theta.size} responses cannot fill {h} slices")
    quantiles = np.quantile(theta, np.arange(1, h) / h)
    cuts = np.unique(quantiles)
    cuts = cuts[cuts < theta.max()]
    if cuts.size == 0:
        raise DegenerateResponseError("all responses are identical; no valid cut point")
    return labels_for_cuts(theta, cuts)


def labels_for_cuts(theta, cut_points) -> SliceSet:
    theta = np.asarray(theta, dtype=float).ravel()
    cuts = np.asarray(cut_points, dtype=float).ravel()
    labels = np.where(theta[None, :] <= cuts[:, None], 1.0, -1.0)
    return SliceSet(cut_points=cuts, labels=labels)


def sv_coefficients(psi, y_tilde, alpha, assume_orthonormal: bool = True) -> np.ndarray:
    """c_s = 1/2 (Psi'Psi)^-1 Psi' diag(y) alpha; Psi'Psi = I for an eigenbasis."""
    psi = np.asarray(psi, dtype=float)
    weighted = np.asarray(y_tilde, dtype=float) * np.asarray(alpha, dtype=float)
    if weighted.shape[0] != psi.shape[0]:
        raise DimensionError(f"Psi has {psi.shape[0]} rows, labels have {weighted.shape[0]}")
    projected = psi.T @ weighted
    if not assume_orthonormal:
        try:
            projected = np.linalg.solve(psi.T @ psi, projected)
        except np.linalg.LinAlgError as e:
            raise FitError(f"Psi'Psi is singular: {e}") from e
    return 0.5 * projected


def principal_directions(C, d: int, solver: EigenSolver = "lapack") -> Directions:
    C = np.asarray(C, dtype=float)
    if d > C.shape[0]:
        raise ArgumentError(f"target dimension d={d} exceeds basis size {C.shape[0]}")
    pairs = top_k_eigen(C, d, solver=solver)
    if pairs.truncated:
        logger.warning(
            f"Slice coefficient matrix has rank {pairs.values.shape[0]} < d={d}; "
            f"returning the available directions"
        )
    return Directions(V=pairs.vectors, eigenvalues=pairs.values, flagged=pairs.truncated)


def _solve_slice(psi, projection, labels, cost, tol, max_iter) -> np.ndarray:
    problem = SvmDualProblem.from_projection(projection, labels, cost)
    if problem.single_class:
        return np.zeros(psi.shape[1])
    solution = solve_sliced_svm_dual(problem, tol=tol, max_iter=max_iter)
    logger.info(
        f"Slice QP: m={problem.m}, iterations={solution.iterations}, "
        f"support vectors={int(np.count_nonzero(solution.alpha))}, objective={solution.objective:.6e}"
    )
    return sv_coefficients(psi, labels, solution.alpha)


def fit_psvm(theta, X, config: Optional[PsvmConfig] = None, threads: int = 1) -> SDRMap:
    """
    Fit the kernel PSVM summary map.

    Args:
        theta: m scalar responses (prior draws)
        X: m x p matrix of predictors (one simulated dataset per row)
        config: kernel, basis size k, slices h, target dimension d, cost, standardisation
        threads: worker threads for the independent per-slice QPs

    Returns:
        SDRMap ready for evaluate_summary
    """
    config = config or PsvmConfig()
    theta = np.asarray(theta, dtype=float).ravel()
    X = as_points(X)
    m = X.shape[0]
    if theta.size != m:
        raise DimensionError(f"{theta.size} responses for {m} predictor rows")
    k = config.k if config.k is not None else max(m // 2, 1)
    if k > m:
        raise ArgumentError(f"basis size k={k} exceeds the {m} training pairs")
    if config.d > k:
        raise ArgumentError(f"target dimension d={config.d} exceeds basis size k={k}")

    if config.standardize:
        col_means, col_sds = column_moments(X)
    else:
        col_means, col_sds = np.zeros(X.shape[1]), np.ones(X.shape[1])
    Z = standardize_columns(X, col_means, col_sds)

    centered = build_centered_gram(
        config.kernel, Z, k, solver=config.eigen_solver, floor=config.eigen_floor
    )
    slices = slice_response(theta, config.h)
    psi = centered.psi
    projection = psi @ psi.T

    def solve(s: int) -> np.ndarray:
        return _solve_slice(
            psi, projection, slices.labels[s], config.cost, config.qp.tol, config.qp.max_iter
        )

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        coefficients = list(pool.map(solve, range(slices.count)))

    active = [c for c in coefficients if np.any(c != 0.0)]
    if not active:
        logger.error("Every slice produced zero support-vector coefficients")
        raise FitError("all slices are degenerate; nothing to run PCA on")
    C = sum(np.outer(c, c) for c in active)
    directions = principal_directions(C, config.d, solver=config.eigen_solver)
    if directions.V.shape[1] == 0:
        raise FitError("slice coefficient matrix has no positive eigenvalue")

    logger.info(
        f"PSVM fitted: m={m}, p={X.shape[1]}, k={centered.k}, slices={slices.count} "
        f"({len(active)} active), d={directions.V.shape[1]}"
    )
    return SDRMap(
        kernel=config.kernel,
        training_points=Z,
        col_means=col_means,
        col_sds=col_sds,
        gram=centered,
        V=directions.V,
        flagged=directions.flagged or centered.truncated,
    )


def _summaries_from_standardized(sdr_map: SDRMap, Z: np.ndarray) -> np.ndarray:
    kernel_rows = cross_gram(sdr_map.kernel, Z, sdr_map.training_points)
    kernel_rows = kernel_rows - kernel_rows.mean(axis=1, keepdims=True)
    scores = (kernel_rows @ sdr_map.gram.psi) / sdr_map.gram.eigenvalues
    return scores @ sdr_map.V


def evaluate_summaries(sdr_map: SDRMap, X) -> np.ndarray:
    X = as_points(X)
    if X.shape[1] != sdr_map.dim:
        raise DimensionError(f"rows have {X.shape[1]} values, the map expects {sdr_map.dim}")
    Z = standardize_columns(X, sdr_map.col_means, sdr_map.col_sds)
    return _summaries_from_standardized(sdr_map, Z)


def evaluate_summary(sdr_map: SDRMap, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.size != sdr_map.dim:
        raise DimensionError(f"data vector has {x.size} values, the map expects {sdr_map.dim}")
    return evaluate_summaries(sdr_map, x.reshape(1, -1))[0]
