"""
Immigration-emigration partial posterior against its Gaussian limit.

The exact partial posterior of t = T^(1/2) (mu - mu_hat) is normalised on a grid
and compared in total variation with N(0, mu_hat^2 / (c lam_hat)) for c = 1
and c = 2; the convention with the smaller distance is reported.
"""

import logging

import numpy as np
import pandas as pd

from abc_engine.export import path_frame
from abc_engine.streams import draw_stream
from diagnostics.density import total_variation
from experiments.output import ExperimentOutput
from models.birth_death import (
    gaussian_limit_applies,
    iep_limit_density,
    iep_mle,
    iep_partial_posterior_t_density,
    simulate_birth_death,
)
from models.grid import GridDensity
from pydantic_models.models import ExperimentConfig

logger = logging.getLogger(__name__)

GRID_HALF_WIDTH = 10.0  # in limit standard deviations under c = 1
TV_THRESHOLD = 0.1


def compare_with_limits(lambda_hat: float, mu_hat: float, R: int, horizon: float, grid_size: int):
    """Grid, exact t density and the two normalised limits with their TV distances."""
    spread = GRID_HALF_WIDTH * mu_hat / np.sqrt(lambda_hat)
    lower = max(-spread, -mu_hat * np.sqrt(horizon) * (1.0 - 1e-9))
    grid = np.linspace(lower, spread, grid_size)
    exact = iep_partial_posterior_t_density(grid, mu_hat, R, horizon)
    limits, distances = {}, {}
    for c in (1, 2):
        limits[c] = GridDensity.from_values(grid, iep_limit_density(grid, lambda_hat, mu_hat, c))
        distances[c] = total_variation(grid, exact.density, limits[c].density)
    return grid, exact, limits, distances


def run(config: ExperimentConfig, threads: int = 1) -> ExperimentOutput:
    section = config.iep_limit
    seed = config.experiment.seed
    path = simulate_birth_death(section.lam, section.mu, section.x0, section.horizon, draw_stream(seed, "observed", 0))
    lambda_hat, mu_hat = iep_mle(path)
    R = path.x0 + path.r1

    grid, exact, limits, distances = compare_with_limits(lambda_hat, mu_hat, R, section.horizon, section.grid_size)
    chosen = min(distances, key=distances.get)
    applies = gaussian_limit_applies(mu_hat)
    if not applies:
        logger.warning(
            f"mu_hat={mu_hat:.4f} is below e: the partial posterior does not concentrate "
            f"and neither Gaussian limit describes it"
        )

    report = {
        "r1": path.r1,
        "r2": path.r2,
        "area": path.area,
        "lambda_hat": lambda_hat,
        "mu_hat": mu_hat,
        "R": R,
        "tv_c1": distances[1],
        "tv_c2": distances[2],
        "chosen_c": chosen,
        "tv_chosen": distances[chosen],
        "tv_pass": distances[chosen] <= TV_THRESHOLD,
        "gaussian_limit_applies": applies,
    }
    samples = pd.DataFrame(
        {
            "t": grid,
            "exact": exact.density,
            "limit_c1": limits[1].density,
            "limit_c2": limits[2].density,
        }
    )
    times, states = path.step_points()
    plotdata = {"path": path_frame(times, states)}
    logger.info(f"Birth-death limit: TV c=1 {distances[1]:.4f}, c=2 {distances[2]:.4f}; chose c={chosen}")
    return ExperimentOutput(samples=samples, plotdata=plotdata, report=report)
