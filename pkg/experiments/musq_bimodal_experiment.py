"""
Bimodal partial posterior for mu in N(mu, mu^2) given s^2, with the chi-square
credible set for mu^2 mapped back to mu.
"""

import logging

import numpy as np
import pandas as pd

from abc_engine.export import series_frame
from abc_engine.streams import draw_stream
from experiments.output import ExperimentOutput
from models.grid import GridDensity
from models.normal_musq import (
    musq_credible_set,
    normal_musq_modes,
    normal_musq_partial_posterior,
    posterior_musq_parameters,
    simulate_normal_musq,
)
from pydantic_models.models import ExperimentConfig

logger = logging.getLogger(__name__)


def count_modes(density: np.ndarray) -> int:
    slope = np.sign(np.diff(density))
    slope = slope[slope != 0]
    return int(np.sum((slope[:-1] > 0) & (slope[1:] < 0)))


def run(config: ExperimentConfig, threads: int = 1) -> ExperimentOutput:
    section = config.musq_bimodal
    seed = config.experiment.seed
    data = simulate_normal_musq(section.mu0, section.n, draw_stream(seed, "observed", 0))
    s_sq = float(np.var(data, ddof=1))
    a_post, b_post = posterior_musq_parameters(s_sq, section.n, section.shape, section.scale)

    _, mode = normal_musq_modes(s_sq, section.n, section.shape, section.scale)
    reach = 6.0 * mode
    grid = np.linspace(-reach, reach, section.grid_size)
    posterior = GridDensity.from_values(
        grid, normal_musq_partial_posterior(grid, s_sq, section.n, section.shape, section.scale)
    )
    credible = musq_credible_set(s_sq, section.n, section.level)

    report = {
        "s_sq": s_sq,
        "posterior_shape": a_post,
        "posterior_scale": b_post,
        "mode_positive": mode,
        "mode_negative": -mode,
        "grid_mode_abs": abs(posterior.mode()),
        "mode_count": count_modes(posterior.density),
        "symmetric_mass_gap": float(abs(posterior.cdf(0.0) - 0.5)),
        "credible_intervals": len(credible),
    }
    for position, (lower, upper) in enumerate(credible, start=1):
        report[f"credible_{position}_lower"] = lower
        report[f"credible_{position}_upper"] = upper

    samples = pd.DataFrame({"grid": grid, "density": posterior.density})
    plotdata = {"observed_data": series_frame(data)}
    logger.info(f"N(mu, mu^2): s^2={s_sq:.4f}, modes at +-{mode:.4f}, {len(credible)} credible interval(s)")
    return ExperimentOutput(samples=samples, plotdata=plotdata, report=report)
