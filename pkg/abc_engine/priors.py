from dataclasses import dataclass, field
from typing import Callable, Dict, Literal

import numpy as np
from scipy import stats

from errors.errors import ArgumentError

PriorKind = Literal["uniform", "exponential", "inverse_gamma", "custom"]


@dataclass(frozen=True)
class PriorSpec:
    kind: PriorKind
    sampler: Callable[[np.random.Generator], float]
    log_density: Callable[[float], float]
    params: Dict[str, float] = field(default_factory=dict)

    def sample(self, stream: np.random.Generator) -> float:
        return float(self.sampler(stream))

    def describe(self) -> Dict[str, object]:
        return {"kind": self.kind, **self.params}


def _from_frozen(kind: PriorKind, dist, params: Dict[str, float]) -> PriorSpec:
    def sampler(stream: np.random.Generator) -> float:
        return float(dist.rvs(random_state=stream))

    def log_density(theta: float) -> float:
        return float(dist.logpdf(theta))

    return PriorSpec(kind=kind, sampler=sampler, log_density=log_density, params=params)


def uniform_prior(low: float, high: float) -> PriorSpec:
    if not low < high:
        raise ArgumentError(f"uniform prior needs low < high, got ({low}, {high})")
    return _from_frozen("uniform", stats.uniform(loc=low, scale=high - low), {"low": low, "high": high})


def exponential_prior(rate: float) -> PriorSpec:
    if not rate > 0:
        raise ArgumentError(f"exponential prior needs a positive rate, got {rate}")
    return _from_frozen("exponential", stats.expon(scale=1.0 / rate), {"rate": rate})


def inverse_gamma_prior(shape: float, scale: float) -> PriorSpec:
    if not (shape > 0 and scale > 0):
        raise ArgumentError(f"inverse gamma prior needs positive shape and scale, got ({shape}, {scale})")
    return _from_frozen(
        "inverse_gamma", stats.invgamma(shape, scale=scale), {"shape": shape, "scale": scale}
    )


def custom_prior(
    sampler: Callable[[np.random.Generator], float],
    log_density: Callable[[float], float],
    **params: float,
) -> PriorSpec:
    return PriorSpec(kind="custom", sampler=sampler, log_density=log_density, params=params)
