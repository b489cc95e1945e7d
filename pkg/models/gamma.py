"""
Gamma shape model X_i ~ Gamma(shape=alpha, scale=beta) with beta known.

The moment M-estimator alpha~ = mean(X) / beta satisfies
alpha~ ~ Gamma(n alpha, scale 1/n), which gives the partial posterior under an
exponential(prior_rate) prior in closed form. The MLE solves the score
equation digamma(alpha) = mean(log X) - log beta.
"""

import logging

import numpy as np
from scipy.special import digamma, gammaln, polygamma

from errors.errors import ArgumentError, RootError
from models.model_spec import ModelSpec, register_model

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.5772156649015329


def _positive_data(data) -> np.ndarray:
    data = np.asarray(data, dtype=float).ravel()
    if data.size == 0 or np.any(data <= 0):
        raise ArgumentError("gamma data must be nonempty and strictly positive")
    return data


def simulate_gamma(alpha: float, beta: float, n: int, stream: np.random.Generator) -> np.ndarray:
    if not (alpha > 0 and beta > 0):
        raise ArgumentError(f"gamma shape and scale must be positive, got ({alpha}, {beta})")
    return stream.gamma(shape=alpha, scale=beta, size=n)


def gamma_m_estimator(data, beta: float) -> float:
    return float(np.mean(_positive_data(data)) / beta)


def gamma_log_likelihood(alpha: float, data, beta: float) -> float:
    data = _positive_data(data)
    n = data.size
    return float(
        (alpha - 1.0) * np.sum(np.log(data))
        - np.sum(data) / beta
        - n * gammaln(alpha)
        - n * alpha * np.log(beta)
    )


def _inverse_digamma_start(target: float) -> float:
    if target >= -2.22:
        return float(np.exp(target) + 0.5)
    return float(-1.0 / (target + EULER_GAMMA))


def gamma_mle(data, beta: float, tol: float = 1e-12, max_iter: int = 100) -> float:
    """
    Solve digamma(alpha) = mean(log X) - log(beta) by Newton's method.

    Steps that leave the current bracket fall back to bisection, so the
    iteration cannot escape to alpha <= 0.

    Raises:
        RootError: no convergence within max_iter iterations
    """
    data = _positive_data(data)
    if not beta > 0:
        raise ArgumentError(f"scale must be positive, got {beta}")
    target = float(np.mean(np.log(data)) - np.log(beta))
    alpha = _inverse_digamma_start(target)
    low, high = 0.0, np.inf

    for iteration in range(1, max_iter + 1):
        residual = float(digamma(alpha)) - target
        if abs(residual) <= tol:
            logger.debug(f"Gamma MLE converged in {iteration} iterations: alpha={alpha:.12g}")
            return alpha
        if residual > 0:
            high = alpha
        else:
            low = alpha
        candidate = alpha - residual / float(polygamma(1, alpha))
        if not low < candidate < high:
            candidate = 0.5 * (low + high) if np.isfinite(high) else 2.0 * alpha
        if abs(candidate - alpha) <= 1e-15 * alpha:
            return candidate
        alpha = candidate

    logger.error(f"Gamma MLE did not converge: last alpha={alpha!r}, target={target!r}")
    raise RootError(f"Newton iteration for the gamma MLE did not converge in {max_iter} iterations")


def gamma_partial_posterior_logpdf(alpha, alpha_tilde: float, n: int, prior_rate: float = 1.0):
    """
    Unnormalised log density of alpha given the M-estimator alpha~:
    n alpha log(n alpha~) - prior_rate alpha - log Gamma(n alpha).
    """
    alpha = np.asarray(alpha, dtype=float)
    safe = np.where(alpha > 0, alpha, 1.0)
    values = n * safe * np.log(n * alpha_tilde) - prior_rate * safe - gammaln(n * safe)
    return np.where(alpha > 0, values, -np.inf)


def gamma_full_posterior_logpdf(alpha, data, beta: float, prior_rate: float = 1.0):
    """Unnormalised log posterior of alpha from the full data under the same prior."""
    data = _positive_data(data)
    n = data.size
    log_sum = float(np.sum(np.log(data)))
    alpha = np.asarray(alpha, dtype=float)
    safe = np.where(alpha > 0, alpha, 1.0)
    values = (safe - 1.0) * log_sum - n * safe * np.log(beta) - n * gammaln(safe) - prior_rate * safe
    return np.where(alpha > 0, values, -np.inf)


def fisher_information(alpha: float) -> float:
    """Per-observation Fisher information for the shape: trigamma(alpha)."""
    return float(polygamma(1, alpha))


def godambe_information(alpha: float) -> float:
    """Per-observation Godambe information of alpha~ = mean / beta: G1^2 / V0 = 1 / alpha."""
    return 1.0 / alpha


@register_model("gamma")
def gamma_model(beta: float = 2.0) -> ModelSpec:
    def simulate(alpha: float, n: int, stream: np.random.Generator) -> np.ndarray:
        return simulate_gamma(alpha, beta, n, stream)

    def estimator(data) -> float:
        return gamma_m_estimator(data, beta)

    return ModelSpec(name="gamma", simulate=simulate, reference_estimator=estimator)
