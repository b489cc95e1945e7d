"""
Kernel substrate for the principal support vector machine: kernel evaluation,
Gram matrices, double centering with Q = I - J/n and the top-k eigenbasis of QKQ.
"""

import logging
from dataclasses import dataclass
from typing import Literal, NamedTuple, Optional

import numpy as np

from errors.errors import ArgumentError, ConvergenceError, DegenerateDataError, DimensionError
from kernel_core.jacobi import jacobi_eigh
from pydantic_models.models import KernelSpec

logger = logging.getLogger(__name__)

EigenSolver = Literal["lapack", "jacobi"]

# eigenpairs with lambda <= POSITIVITY_FLOOR * lambda_1 are dropped from the basis
POSITIVITY_FLOOR = 1e-10


class EigenPairs(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray
    truncated: bool  # fewer pairs than requested survived the positivity floor


@dataclass(frozen=True)
class CenteredGram:
    K: np.ndarray
    S: np.ndarray
    eigenvalues: np.ndarray
    psi: np.ndarray
    truncated: bool = False

    @property
    def k(self) -> int:
        return self.eigenvalues.shape[0]


def as_points(data) -> np.ndarray:
    points = np.asarray(data, dtype=float)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    if points.ndim != 2:
        raise DimensionError(f"expected a 2-d array of points, got {points.ndim} dimensions")
    if points.shape[0] == 0:
        raise ArgumentError("cannot build a Gram matrix from empty data")
    return points


def kernel_eval(spec: KernelSpec, x, y) -> float:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise DimensionError(f"kernel arguments differ in length: {x.size} vs {y.size}")
    if spec.kind == "linear":
        return float(x @ y)
    sq = max(float(x @ x) + float(y @ y) - 2.0 * float(x @ y), 0.0)
    return float(np.exp(-spec.gamma * sq))


def cross_gram(spec: KernelSpec, rows, data) -> np.ndarray:
    """Kernel values between each of ``rows`` and each training point in ``data``."""
    rows = as_points(rows)
    data = as_points(data)
    if rows.shape[1] != data.shape[1]:
        raise DimensionError(
            f"points have dimension {rows.shape[1]}, training data has {data.shape[1]}"
        )
    inner = rows @ data.T
    if spec.kind == "linear":
        return inner
    sq = np.sum(rows * rows, axis=1)[:, None] + np.sum(data * data, axis=1)[None, :] - 2.0 * inner
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-spec.gamma * sq)


def gram(spec: KernelSpec, data) -> np.ndarray:
    points = as_points(data)
    k = cross_gram(spec, points, points)
    k = 0.5 * (k + k.T)
    if spec.kind == "gaussian":
        np.fill_diagonal(k, 1.0)
    return k


def center_gram(K) -> np.ndarray:
    """Return QKQ; every row and column of the result sums to zero."""
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {K.shape}")
    row_means = K.mean(axis=1, keepdims=True)
    col_means = K.mean(axis=0, keepdims=True)
    s = K - row_means - col_means + K.mean()
    return 0.5 * (s + s.T)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude component positive; argmax takes the first index on ties
    if vectors.size == 0:
        return vectors
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def symmetric_eigen(S, solver: EigenSolver = "lapack") -> EigenPairs:
    """All eigenpairs of a symmetric matrix in descending order with fixed signs."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise DegenerateDataError("matrix has missing or non-finite entries")
    if solver == "jacobi":
        values, vectors = jacobi_eigh(S)
    else:
        try:
            values, vectors = np.linalg.eigh(S)
        except np.linalg.LinAlgError as e:
            raise ConvergenceError(f"symmetric eigensolver failed: {e}") from e
    order = np.argsort(-values, kind="stable")
    return EigenPairs(values[order], _fix_signs(vectors[:, order]), False)


def top_k_eigen(
    S,
    k: int,
    solver: EigenSolver = "lapack",
    floor: Optional[float] = POSITIVITY_FLOOR,
) -> EigenPairs:
    """
    Largest k eigenpairs of a symmetric matrix.

    Args:
        S: n x n symmetric matrix
        k: number of pairs requested, 1 <= k <= n
        solver: "lapack" (numpy.linalg.eigh) or "jacobi" (cyclic Jacobi sweeps)
        floor: pairs with value <= floor * lambda_1 are dropped; None keeps everything

    Returns:
        EigenPairs with ``truncated`` set when fewer than k pairs qualified
    """
    S = np.asarray(S, dtype=float)
    n = S.shape[0]
    if not 1 <= k <= n:
        raise ArgumentError(f"requested k={k} eigenpairs of a {n} x {n} matrix")
    full = symmetric_eigen(S, solver)
    values = full.values[:k]
    vectors = full.vectors[:, :k]
    if floor is not None:
        cutoff = floor * full.values[0] if full.values[0] > 0 else np.inf
        keep = values > cutoff
        values = values[keep]
        vectors = vectors[:, keep]
    truncated = values.shape[0] < k
    if truncated:
        logger.warning(
            f"Only {values.shape[0]} of {k} requested eigenpairs lie above the positivity floor"
        )
    return EigenPairs(values, vectors, truncated)


def build_centered_gram(
    spec: KernelSpec, data, k: int, solver: EigenSolver = "lapack", floor: float = POSITIVITY_FLOOR
) -> CenteredGram:
    K = gram(spec, data)
    S = center_gram(K)
    pairs = top_k_eigen(S, k, solver=solver, floor=floor)
    if pairs.values.shape[0] == 0:
        raise DegenerateDataError("centered Gram matrix has no positive eigenvalues")
    logger.info(
        f"Centered Gram of {K.shape[0]} points: kept {pairs.values.shape[0]} eigenpairs, "
        f"lambda_1={pairs.values[0]:.4e}, lambda_k={pairs.values[-1]:.4e}"
    )
    return CenteredGram(K=K, S=S, eigenvalues=pairs.values, psi=pairs.vectors, truncated=pairs.truncated)
