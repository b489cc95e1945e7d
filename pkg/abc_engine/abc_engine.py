"""
Rejection ABC with PSVM-learned summary statistics.

run_abc follows four steps:
  1. draw theta_i from the prior and simulate a dataset of the observed length,
  2. fit the kernel PSVM map on (theta_i, X_i),
  3. summarise the training draws (or a fresh batch) and the observed data,
  4. accept by distance to the observed summary.

run_rejection_abc is the same loop with a fixed, user supplied summary.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from abc_engine.priors import PriorSpec
from abc_engine.streams import StreamDomain, draw_stream
from errors.errors import ArgumentError, DimensionError, InferenceError
from models.model_spec import ModelSpec
from psvm.psvm import SDRMap, evaluate_summaries, evaluate_summary, fit_psvm
from pydantic_models.models import ABCConfig, AcceptanceRule

logger = logging.getLogger(__name__)

ZERO_SCALE = 1e-12


@dataclass(frozen=True)
class Selection:
    indices: np.ndarray
    warning: Optional[str] = None


@dataclass(frozen=True)
class ABCResult:
    thetas: np.ndarray
    summaries: np.ndarray  # N x d
    s_obs: np.ndarray
    distances: np.ndarray
    accepted: np.ndarray  # ascending indices into thetas
    datasets: np.ndarray  # N x n simulated datasets behind ``summaries``
    manifest: Dict[str, Any] = field(default_factory=dict)
    warning: Optional[str] = None
    sdr_map: Optional[SDRMap] = None

    @property
    def accepted_thetas(self) -> np.ndarray:
        return self.thetas[self.accepted]

    @property
    def accepted_mask(self) -> np.ndarray:
        mask = np.zeros(self.thetas.shape[0], dtype=bool)
        mask[self.accepted] = True
        return mask


def summary_distance(a, b, metric: str = "euclidean", scales=None) -> float:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        raise DimensionError(f"summaries differ in dimension: {a.size} vs {b.size}")
    return float(summary_distances(a.reshape(1, -1), b, metric, scales)[0])


def summary_distances(summaries, s_obs, metric: str = "euclidean", scales=None) -> np.ndarray:
    """Distances from every row of ``summaries`` to ``s_obs``."""
    summaries = np.asarray(summaries, dtype=float)
    s_obs = np.atleast_1d(np.asarray(s_obs, dtype=float))
    if summaries.ndim != 2 or summaries.shape[1] != s_obs.size:
        raise DimensionError(
            f"summaries of shape {summaries.shape} cannot be compared with a {s_obs.size}-vector"
        )
    diff = summaries - s_obs
    if metric == "standardized_euclidean":
        if scales is None:
            raise ArgumentError("standardized_euclidean needs per-component scales")
        scales = np.atleast_1d(np.asarray(scales, dtype=float))
        if scales.size != s_obs.size:
            raise DimensionError(f"{scales.size} scales for {s_obs.size} summary components")
        keep = scales > ZERO_SCALE
        diff = diff[:, keep] / scales[keep]
    elif metric != "euclidean":
        raise ArgumentError(f"unknown metric {metric!r}")
    return np.sqrt(np.sum(diff * diff, axis=1))


def select_accepted(distances, rule: AcceptanceRule) -> Selection:
    distances = np.asarray(distances, dtype=float).ravel()
    if not np.all(np.isfinite(distances)):
        raise ArgumentError("distances must be finite")
    n = distances.size
    if rule.quantile is not None:
        count = min(n, max(int(math.ceil(rule.quantile * n - 1e-9)), 1))
        order = np.argsort(distances, kind="stable")
        return Selection(indices=np.sort(order[:count]))
    indices = np.flatnonzero(distances <= rule.epsilon)
    if indices.size == 0:
        warning = f"epsilon={rule.epsilon!r} accepted none of {n} draws"
        logger.warning(warning)
        return Selection(indices=indices, warning=warning)
    return Selection(indices=indices)


def simulate_draws(
    model: ModelSpec,
    prior: PriorSpec,
    n_obs: int,
    n_draws: int,
    seed: int,
    domain: StreamDomain = "training",
    threads: int = 1,
) -> Tuple[np.ndarray, np.ndarray]:
    """Prior draws and one simulated dataset per draw, each from its own stream."""

    def one(i: int) -> Tuple[float, np.ndarray]:
        stream = draw_stream(seed, domain, i)
        theta = prior.sample(stream)
        return theta, model.draw(theta, n_obs, stream)

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        results = list(pool.map(one, range(n_draws)))
    thetas = np.array([theta for theta, _ in results])
    datasets = np.vstack([data for _, data in results])
    logger.info(f"Simulated {n_draws} {domain} datasets of length {n_obs} from model {model.name}")
    return thetas, datasets


def _select_by_summary(
    summaries: np.ndarray, s_obs: np.ndarray, config: ABCConfig
) -> Tuple[np.ndarray, Selection]:
    scales = summaries.std(axis=0)
    if not np.any(scales > ZERO_SCALE):
        logger.error("Every summary component has zero variance across draws")
        raise InferenceError("simulated summaries are degenerate; nothing to compare against")
    distances = summary_distances(summaries, s_obs, config.metric, scales)
    selection = select_accepted(distances, config.accept)
    logger.info(
        f"Accepted {selection.indices.size} of {distances.size} draws ({config.accept.label}, {config.metric})"
    )
    return distances, selection


def _base_manifest(model: ModelSpec, prior: PriorSpec, config: ABCConfig) -> Dict[str, Any]:
    return {
        "model": model.name,
        "prior": prior.describe(),
        "abc": config.model_dump(mode="json"),
        "seed": config.seed,
        "acceptance": config.accept.label,
    }


def run_abc(
    model: ModelSpec,
    prior: PriorSpec,
    observed,
    config: ABCConfig,
    threads: int = 1,
) -> ABCResult:
    """
    ABC with summaries learned by the kernel PSVM.

    Args:
        model: generative model
        prior: prior on the scalar parameter
        observed: observed dataset of length config.n_obs
        config: draws, acceptance rule, metric, PSVM settings and seed
        threads: worker threads for simulation and per-slice QPs

    Returns:
        ABCResult; identical for any thread count
    """
    observed = np.asarray(observed, dtype=float).ravel()
    if observed.size != config.n_obs:
        raise DimensionError(f"observed data has length {observed.size}, config expects {config.n_obs}")

    thetas, datasets = simulate_draws(
        model, prior, config.n_obs, config.n_prior, config.seed, "training", threads
    )
    sdr_map = fit_psvm(thetas, datasets, config.psvm, threads=threads)

    if config.reuse_training:
        summaries = sdr_map.training_summaries()
    else:
        thetas, datasets = simulate_draws(
            model, prior, config.n_obs, config.n_prior, config.seed, "fresh", threads
        )
        summaries = evaluate_summaries(sdr_map, datasets)
    s_obs = evaluate_summary(sdr_map, observed)

    distances, selection = _select_by_summary(summaries, s_obs, config)
    manifest = _base_manifest(model, prior, config)
    manifest.update(
        {
            "summary": "psvm",
            "summary_dimension": sdr_map.d,
            "basis_size": sdr_map.k,
            "map_flagged": sdr_map.flagged,
            "accepted": int(selection.indices.size),
        }
    )
    return ABCResult(
        thetas=thetas,
        summaries=summaries,
        s_obs=s_obs,
        distances=distances,
        accepted=selection.indices,
        datasets=datasets,
        manifest=manifest,
        warning=selection.warning,
        sdr_map=sdr_map,
    )


def run_rejection_abc(
    model: ModelSpec,
    prior: PriorSpec,
    observed,
    summary_fn: Callable[[np.ndarray], Any],
    config: ABCConfig,
    threads: int = 1,
) -> ABCResult:
    """Plain rejection ABC with a fixed summary statistic; the PSVM settings in ``config`` are unused."""
    observed = np.asarray(observed, dtype=float).ravel()
    if observed.size != config.n_obs:
        raise DimensionError(f"observed data has length {observed.size}, config expects {config.n_obs}")

    thetas, datasets = simulate_draws(
        model, prior, config.n_obs, config.n_prior, config.seed, "training", threads
    )
    summaries = np.vstack([np.atleast_1d(np.asarray(summary_fn(row), dtype=float)) for row in datasets])
    s_obs = np.atleast_1d(np.asarray(summary_fn(observed), dtype=float))

    distances, selection = _select_by_summary(summaries, s_obs, config)
    manifest = _base_manifest(model, prior, config)
    manifest.update(
        {
            "summary": getattr(summary_fn, "__name__", "custom"),
            "summary_dimension": int(s_obs.size),
            "accepted": int(selection.indices.size),
        }
    )
    return ABCResult(
        thetas=thetas,
        summaries=summaries,
        s_obs=s_obs,
        distances=distances,
        accepted=selection.indices,
        datasets=datasets,
        manifest=manifest,
        warning=selection.warning,
    )
