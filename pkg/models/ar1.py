"""
AR(1) model  Y_1 = y1,  Y_i = beta * Y_{i-1} + sigma * e_i,  e_i ~ N(0, 1).

The reference posterior under a uniform(a, b) prior is tabulated on a grid from
likelihood x prior; with known sigma it is the normal N(Sxy / Sxx, sigma^2 / Sxx)
truncated to (a, b), which ar1_truncated_normal_posterior gives in closed form.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import stats

from errors.errors import ArgumentError, DegenerateDataError
from models.grid import MIN_GRID, GridDensity
from models.model_spec import ModelSpec, register_model

logger = logging.getLogger(__name__)


def simulate_ar1(beta: float, n: int, sigma: float, y1: float, stream: np.random.Generator) -> np.ndarray:
    if n < 2:
        raise ArgumentError(f"an AR(1) series needs n >= 2, got {n}")
    noise = stream.standard_normal(n - 1)
    series = np.empty(n)
    series[0] = y1
    for i in range(1, n):
        series[i] = beta * series[i - 1] + sigma * noise[i - 1]
    return series


def lag_products(series) -> Tuple[float, float, float]:
    """(sum Y_i Y_{i+1}, sum Y_i^2, sum Y_{i+1}^2) over i = 1..n-1."""
    y = np.asarray(series, dtype=float).ravel()
    if y.size < 2:
        raise ArgumentError("series needs at least two values")
    lead, lag = y[1:], y[:-1]
    return float(lag @ lead), float(lag @ lag), float(lead @ lead)


def ar1_mle(series) -> float:
    sxy, sxx, _ = lag_products(series)
    if sxx == 0:
        raise DegenerateDataError("sum of squared lagged values is zero; the AR(1) MLE is undefined")
    return sxy / sxx


def ar1_log_likelihood(beta, series, sigma: float):
    sxy, sxx, syy = lag_products(series)
    beta = np.asarray(beta, dtype=float)
    return -(syy - 2.0 * beta * sxy + beta * beta * sxx) / (2.0 * sigma * sigma)


def ar1_reference_posterior(
    series,
    sigma: float,
    low: float = -1.0,
    high: float = 1.0,
    grid_size: int = MIN_GRID,
    grid: Optional[np.ndarray] = None,
) -> GridDensity:
    if not low < high:
        raise ArgumentError(f"prior support ({low}, {high}) is empty")
    grid = np.linspace(low, high, grid_size) if grid is None else np.asarray(grid, dtype=float)
    log_values = np.where(
        (grid >= low) & (grid <= high), ar1_log_likelihood(grid, series, sigma), -np.inf
    )
    posterior = GridDensity.from_log_values(grid, log_values)
    posterior.check_resolution(support_low=low, support_high=high)
    return posterior


def ar1_truncated_normal_posterior(series, sigma: float, low: float = -1.0, high: float = 1.0):
    sxy, sxx, _ = lag_products(series)
    if sxx == 0:
        raise DegenerateDataError("sum of squared lagged values is zero")
    center = sxy / sxx
    scale = sigma / np.sqrt(sxx)
    return stats.truncnorm((low - center) / scale, (high - center) / scale, loc=center, scale=scale)


def ar1_stated_posterior(series):
    """N(sum Y_i Y_{i+1} / (1 + sum Y_i^2), 1 / (1 + sum Y_i^2)): no sigma, no truncation."""
    sxy, sxx, _ = lag_products(series)
    return stats.norm(loc=sxy / (1.0 + sxx), scale=np.sqrt(1.0 / (1.0 + sxx)))


@register_model("ar1")
def ar1_model(sigma: float = 0.5, y1: float = 1.0) -> ModelSpec:
    def simulate(beta: float, n: int, stream: np.random.Generator) -> np.ndarray:
        return simulate_ar1(beta, n, sigma, y1, stream)

    def oracle(beta: float, series) -> float:
        return float(ar1_log_likelihood(beta, series, sigma))

    return ModelSpec(name="ar1", simulate=simulate, reference_estimator=ar1_mle, oracle_log_density=oracle)
