"""
Credible intervals and sets.

Equal-tail empirical intervals use numpy's linear quantile (order statistic
position (m - 1) p + 1). Wald-type intervals take the per-observation
information, Fisher I or Godambe V~^-1, and give center +- z (n info)^(-1/2).
The chi-square set treats Sigma~ as the asymptotic covariance of
n^(1/2) (S - h(theta)), so the quadratic form uses its inverse.
"""

import logging
from typing import Callable, Union

import numpy as np
from scipy import stats

from errors.errors import ArgumentError, DimensionError
from pydantic_models.models import IntervalReport

logger = logging.getLogger(__name__)

MIN_SAMPLES = 20


def credible_interval(samples, level: float = 0.95) -> IntervalReport:
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size < MIN_SAMPLES:
        raise ArgumentError(f"need at least {MIN_SAMPLES} samples, got {samples.size}")
    if not 0 < level < 1:
        raise ArgumentError(f"level must lie in (0, 1), got {level}")
    lower, upper = np.quantile(samples, [(1.0 - level) / 2.0, (1.0 + level) / 2.0])
    return IntervalReport(
        center=0.5 * float(lower + upper),
        half_width=0.5 * float(upper - lower),
        level=level,
        basis="empirical",
    )


def normal_quantile(level: float) -> float:
    """Two-sided critical value z_{(1 + level) / 2}."""
    return float(stats.norm.ppf(0.5 * (1.0 + level)))


def wald_interval(center: float, info_per_obs: float, n: int, level: float, basis: str) -> IntervalReport:
    if not info_per_obs > 0:
        raise ArgumentError(f"information must be positive, got {info_per_obs}")
    if n < 1:
        raise ArgumentError(f"sample size must be positive, got {n}")
    half_width = normal_quantile(level) / np.sqrt(n * info_per_obs)
    return IntervalReport(center=center, half_width=float(half_width), level=level, basis=basis)


def chisq_quantile(level: float, q: int) -> float:
    return float(stats.chi2.ppf(level, q))


def chisq_form(h_value, S, Sigma_tilde, n: int) -> float:
    """n (h - S)' Sigma~^-1 (h - S)."""
    diff = np.atleast_1d(np.asarray(h_value, dtype=float)) - np.atleast_1d(np.asarray(S, dtype=float))
    sigma = np.atleast_2d(np.asarray(Sigma_tilde, dtype=float))
    if sigma.shape != (diff.size, diff.size):
        raise DimensionError(f"Sigma~ has shape {sigma.shape}, expected ({diff.size}, {diff.size})")
    if not np.allclose(sigma, sigma.T, rtol=1e-10, atol=1e-14):
        raise ArgumentError("Sigma~ must be symmetric")
    try:
        factor = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise ArgumentError("Sigma~ must be positive definite")
    whitened = np.linalg.solve(factor, diff)
    return float(n * whitened @ whitened)


def chisq_credible_set_membership(
    theta,
    h_of_theta: Union[Callable, np.ndarray],
    S,
    Sigma_tilde,
    n: int,
    level: float = 0.95,
) -> bool:
    """Whether theta lies in {theta: n (h(theta) - S)' Sigma~^-1 (h(theta) - S) <= chi2_{level, q}}."""
    h_value = h_of_theta(theta) if callable(h_of_theta) else h_of_theta
    h_value = np.atleast_1d(np.asarray(h_value, dtype=float))
    return chisq_form(h_value, S, Sigma_tilde, n) <= chisq_quantile(level, h_value.size)
