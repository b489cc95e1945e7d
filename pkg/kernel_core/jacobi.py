"""
Cyclic Jacobi eigensolver for dense symmetric matrices.

Each sweep visits every off-diagonal pair (p, q) in row order and applies the
rotation that zeroes A[p, q]. Sweeps stop once the off-diagonal Frobenius norm
falls below ``rel_tol * ||S||_F``.
"""

import logging
from typing import Tuple

import numpy as np

from errors.errors import ConvergenceError, DimensionError

logger = logging.getLogger(__name__)

# beyond this theta * theta overflows; t ~ 1 / (2 theta)
HUGE_THETA = 1e150


def _off_norm(a: np.ndarray) -> float:
    # summed directly over the upper triangle; ||A||^2 - ||diag||^2 cancels near convergence
    upper = np.triu(a, k=1)
    return float(np.sqrt(2.0) * np.linalg.norm(upper))


def _rotation_tangent(theta: float) -> float:
    """Smaller root of t^2 + 2 theta t - 1 = 0."""
    if abs(theta) > HUGE_THETA:
        return 0.5 / theta
    return float(np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)))


def jacobi_eigh(
    s: np.ndarray, rel_tol: float = 1e-11, max_sweeps: int = 100
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Full eigendecomposition of a symmetric matrix.

    Args:
        s: n x n symmetric matrix
        rel_tol: convergence threshold relative to the Frobenius norm of ``s``
        max_sweeps: cap on cyclic sweeps

    Returns:
        (eigenvalues, eigenvectors) unsorted, eigenvectors as columns
    """
    a = np.array(s, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    v = np.eye(n)
    threshold = rel_tol * float(np.linalg.norm(a))

    for sweep in range(max_sweeps):
        off = _off_norm(a)
        if off <= threshold:
            logger.debug(f"Jacobi converged after {sweep} sweeps (off-norm {off:.3e})")
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = _rotation_tangent(theta)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s_ = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s_ * col_q
                a[:, q] = s_ * col_p + c * col_q

                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s_ * row_q
                a[q, :] = s_ * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s_ * vec_q
                v[:, q] = s_ * vec_p + c * vec_q

    off = _off_norm(a)
    if off <= threshold:
        return np.diag(a).copy(), v
    raise ConvergenceError(
        f"Jacobi sweeps did not converge: off-diagonal norm {off:.3e} > {threshold:.3e}",
        best=(np.diag(a).copy(), v),
    )
