"""
Laplace location model X = mu + (E1 - E2), E1, E2 ~ Exponential(mean lam).

Writing the observations through this pivot, a posterior draw of mu given the
observed mean z_bar is z_bar - (g1 - g2) with g1, g2 independent means of n
exponential draws, i.e. Gamma(n, scale lam / n) variables.
"""

from typing import Optional

import numpy as np

from errors.errors import ArgumentError
from models.model_spec import ModelSpec, register_model


def simulate_laplace(mu: float, lam: float, n: int, stream: np.random.Generator) -> np.ndarray:
    if not lam > 0:
        raise ArgumentError(f"Laplace scale must be positive, got {lam}")
    return stream.laplace(loc=mu, scale=lam, size=n)


def laplace_mle(data) -> float:
    return float(np.median(np.asarray(data, dtype=float)))


def laplace_moment_estimator(data) -> float:
    return float(np.mean(np.asarray(data, dtype=float)))


def laplace_pivot_posterior_sample(
    z_bar: float, lam: float, n: int, stream: np.random.Generator, size: Optional[int] = None
):
    if n < 1:
        raise ArgumentError(f"need at least one observation, got n={n}")
    if lam < 0:
        raise ArgumentError(f"Laplace scale must be nonnegative, got {lam}")
    g1 = stream.gamma(shape=n, scale=lam / n, size=size)
    g2 = stream.gamma(shape=n, scale=lam / n, size=size)
    draws = z_bar - (g1 - g2)
    return float(draws) if size is None else draws


@register_model("laplace")
def laplace_model(lam: float = 1.0) -> ModelSpec:
    def simulate(mu: float, n: int, stream: np.random.Generator) -> np.ndarray:
        return simulate_laplace(mu, lam, n, stream)

    return ModelSpec(name="laplace", simulate=simulate, reference_estimator=laplace_mle)
