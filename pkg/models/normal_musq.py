"""
N(mu, mu^2) model. The sample variance s^2 only identifies mu^2, so its partial
posterior for mu is symmetric with modes at +-(2b' / (2a' + 1))^(1/2), where
mu^2 ~ InverseGamma(a', b'), a' = shape - 1 + (n - 1) / 2, b' = scale + (n - 1) s^2 / 2.
"""

import logging
from typing import List, Tuple

import numpy as np
from scipy import stats

from diagnostics.intervals import chisq_quantile
from errors.errors import ArgumentError
from models.model_spec import ModelSpec, register_model

logger = logging.getLogger(__name__)


def simulate_normal_musq(mu: float, n: int, stream: np.random.Generator) -> np.ndarray:
    if mu == 0:
        raise ArgumentError("mu must be nonzero: the data would have zero variance")
    return stream.normal(loc=mu, scale=abs(mu), size=n)


def posterior_musq_parameters(s_sq: float, n: int, shape: float, scale: float) -> Tuple[float, float]:
    a_post = shape - 1.0 + (n - 1) / 2.0
    b_post = scale + (n - 1) * s_sq / 2.0
    if not (a_post > 0 and b_post > 0):
        raise ArgumentError(f"posterior inverse gamma parameters must be positive, got ({a_post}, {b_post})")
    return a_post, b_post


def normal_musq_partial_posterior(mu, s_sq: float, n: int, shape: float, scale: float):
    """invgamma_pdf(mu^2) * 2|mu|; mass 1 on each half line. Zero at mu = 0."""
    a_post, b_post = posterior_musq_parameters(s_sq, n, shape, scale)
    mu = np.asarray(mu, dtype=float)
    mu_sq = mu * mu
    safe = np.where(mu_sq > 0, mu_sq, 1.0)
    values = stats.invgamma.pdf(safe, a_post, scale=b_post) * 2.0 * np.abs(mu)
    return np.where(mu_sq > 0, values, 0.0)


def normal_musq_modes(s_sq: float, n: int, shape: float, scale: float) -> Tuple[float, float]:
    a_post, b_post = posterior_musq_parameters(s_sq, n, shape, scale)
    mode = float(np.sqrt(2.0 * b_post / (2.0 * a_post + 1.0)))
    return -mode, mode


def musq_credible_set(s_sq: float, n: int, level: float = 0.95) -> List[Tuple[float, float]]:
    """
    Chi-square credible set for h(mu) = mu^2 with S = s^2 and asymptotic variance 2 s^4,
    mapped back to mu. Two disjoint intervals unless the lower end in mu^2 reaches 0.
    """
    if not s_sq > 0:
        raise ArgumentError(f"sample variance must be positive, got {s_sq}")
    radius = np.sqrt(chisq_quantile(level, 1) * 2.0 * s_sq * s_sq / n)
    low, high = s_sq - radius, s_sq + radius
    upper = float(np.sqrt(high))
    if low <= 0:
        return [(-upper, upper)]
    lower = float(np.sqrt(low))
    return [(-upper, -lower), (lower, upper)]


@register_model("normal_musq")
def normal_musq_model() -> ModelSpec:
    def estimator(data) -> float:
        return float(np.var(np.asarray(data, dtype=float), ddof=1))

    return ModelSpec(
        name="normal_musq",
        simulate=lambda mu, n, stream: simulate_normal_musq(mu, n, stream),
        reference_estimator=estimator,
    )
