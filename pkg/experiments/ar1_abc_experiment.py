"""
AR(1) coefficient by ABC with a PSVM-learned summary.

Reports how the accepted sample compares with the numerically integrated
posterior, the association between the learned summary and the MLE across
the training datasets and across a held-out batch the map never saw, and
optionally a rejection-ABC baseline that uses the MLE itself as the summary.

Every report entry is computed by ``build_report`` from the frames written to
samples.csv and plotdata/, so a checker can re-derive report.txt from the
output directory alone.
"""

import logging
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from abc_engine.abc_engine import run_abc, run_rejection_abc, simulate_draws
from abc_engine.export import samples_frame, series_frame
from abc_engine.priors import uniform_prior
from abc_engine.streams import draw_stream
from diagnostics.association import association_report
from diagnostics.density import kde, ks_statistic
from experiments.output import ExperimentOutput
from models.ar1 import (
    ar1_mle,
    ar1_reference_posterior,
    ar1_stated_posterior,
    ar1_truncated_normal_posterior,
    simulate_ar1,
)
from models.model_spec import build_model
from psvm.psvm import evaluate_summaries
from pydantic_models.models import Ar1Section, ExperimentConfig

logger = logging.getLogger(__name__)

KS_PASS = 0.25
ASSOCIATION_PASS = 0.9

OBSERVED_SERIES = "observed_series"
SUMMARY_VS_MLE = "summary_vs_mle"
HOLDOUT_SUMMARY_VS_MLE = "holdout_summary_vs_mle"
MLE_BASELINE_SAMPLES = "mle_baseline_samples"


def build_report(
    section: Ar1Section,
    samples: pd.DataFrame,
    observed_series: pd.DataFrame,
    summary_vs_mle: pd.DataFrame,
    holdout: Optional[pd.DataFrame] = None,
    baseline: Optional[pd.DataFrame] = None,
) -> Dict[str, Any]:
    """
    Report entries from the written outputs of one AR(1) run.

    Args:
        section: the [ar1] settings (noise sd, first value, prior bounds, grid)
        samples: samples.csv
        observed_series: plotdata/observed_series.csv
        summary_vs_mle: plotdata/summary_vs_mle.csv, training summaries against their MLEs
        holdout: plotdata/holdout_summary_vs_mle.csv, when a held-out batch was drawn
        baseline: plotdata/mle_baseline_samples.csv, accepted thetas of the MLE baseline
    """
    accepted = samples.loc[samples["accepted"] == 1, "theta"].to_numpy(dtype=float)
    observed = observed_series["value"].to_numpy(dtype=float)

    reference = ar1_reference_posterior(
        observed, section.sigma, section.prior_low, section.prior_high, section.grid_size
    )
    truncated = ar1_truncated_normal_posterior(observed, section.sigma, section.prior_low, section.prior_high)
    stated = ar1_stated_posterior(observed)
    reference_mean, reference_sd = reference.mean(), reference.sd()

    association = association_report(
        summary_vs_mle["summary"].to_numpy(dtype=float), summary_vs_mle["mle"].to_numpy(dtype=float)
    )
    abc_mean = float(np.mean(accepted))
    ks = ks_statistic(accepted, reference.cdf)
    report = {
        "observed_mle": ar1_mle(observed),
        "accepted_count": int(accepted.size),
        "abc_mean": abc_mean,
        "abc_sd": float(np.std(accepted, ddof=1)) if accepted.size > 1 else 0.0,
        "reference_mean": reference_mean,
        "reference_sd": reference_sd,
        "truncated_normal_mean": float(truncated.mean()),
        "stated_posterior_mean": float(stated.mean()),
        "stated_posterior_sd": float(stated.std()),
        "mean_gap_in_sd": abs(abc_mean - reference_mean) / reference_sd,
        "mean_within_2sd": abs(abc_mean - reference_mean) <= 2.0 * reference_sd,
        "ks_vs_reference": ks,
        "ks_pass": ks <= KS_PASS,
        "summary_mle_pearson_r": association.pearson_r,
        "summary_mle_slope": association.slope,
        "summary_mle_intercept": association.intercept,
        "association_pass": abs(association.pearson_r) >= ASSOCIATION_PASS,
    }

    if holdout is not None:
        held = association_report(
            holdout["summary"].to_numpy(dtype=float), holdout["mle"].to_numpy(dtype=float)
        )
        report["holdout_count"] = int(len(holdout))
        report["holdout_summary_mle_pearson_r"] = held.pearson_r
        report["holdout_association_pass"] = abs(held.pearson_r) >= ASSOCIATION_PASS

    if baseline is not None:
        baseline_accepted = baseline["theta"].to_numpy(dtype=float)
        report["mle_baseline_mean"] = float(np.mean(baseline_accepted))
        report["mle_baseline_ks_vs_reference"] = ks_statistic(baseline_accepted, reference.cdf)
    return report


def run(config: ExperimentConfig, threads: int = 1) -> ExperimentOutput:
    section = config.ar1
    seed = config.experiment.seed
    observed = simulate_ar1(
        section.beta0, section.n_obs, section.sigma, section.y1, draw_stream(seed, "observed", 0)
    )
    model = build_model("ar1", sigma=section.sigma, y1=section.y1)
    prior = uniform_prior(section.prior_low, section.prior_high)
    abc_config = config.abc_config(section.n_obs)

    result = run_abc(model, prior, observed, abc_config, threads=threads)
    accepted = result.accepted_thetas
    mles = np.array([ar1_mle(row) for row in result.datasets])

    samples = samples_frame(result)
    plotdata = {
        SUMMARY_VS_MLE: pd.DataFrame({"summary": result.summaries[:, 0], "mle": mles}),
        OBSERVED_SERIES: series_frame(observed),
    }

    holdout = None
    if section.n_holdout > 0:
        # draws the map never saw; in-sample summaries also absorb the slice-label fit
        _, held_datasets = simulate_draws(
            model, prior, section.n_obs, section.n_holdout, abc_config.seed, "holdout", threads
        )
        holdout = pd.DataFrame(
            {
                "summary": evaluate_summaries(result.sdr_map, held_datasets)[:, 0],
                "mle": np.array([ar1_mle(row) for row in held_datasets]),
            }
        )
        plotdata[HOLDOUT_SUMMARY_VS_MLE] = holdout

    baseline = None
    if section.baseline_mle:
        baseline_result = run_rejection_abc(model, prior, observed, ar1_mle, abc_config, threads=threads)
        baseline = pd.DataFrame({"theta": baseline_result.accepted_thetas})
        plotdata[MLE_BASELINE_SAMPLES] = baseline

    report = build_report(
        section, samples, plotdata[OBSERVED_SERIES], plotdata[SUMMARY_VS_MLE], holdout, baseline
    )

    reference = ar1_reference_posterior(
        observed, section.sigma, section.prior_low, section.prior_high, section.grid_size
    )
    stated = ar1_stated_posterior(observed)
    grid = reference.grid
    density = kde(accepted, grid=grid).density if accepted.size >= 2 and np.ptp(accepted) > 0 else np.zeros_like(grid)
    plotdata["posterior_density"] = pd.DataFrame(
        {
            "grid": grid,
            "abc_kde": density,
            "reference": reference.density,
            "stated": stated.pdf(grid),
        }
    )
    logger.info(
        f"AR(1) ABC: mean {report['abc_mean']:.4f} vs reference {report['reference_mean']:.4f} "
        f"(sd {report['reference_sd']:.4f}), KS {report['ks_vs_reference']:.3f}, "
        f"r={report['summary_mle_pearson_r']:.3f}, "
        f"held-out r={report.get('holdout_summary_mle_pearson_r', float('nan')):.3f}"
    )
    sources = ["samples.csv"] + [
        f"plotdata/{name}.csv"
        for name in (OBSERVED_SERIES, SUMMARY_VS_MLE, HOLDOUT_SUMMARY_VS_MLE, MLE_BASELINE_SAMPLES)
        if name in plotdata
    ]
    return ExperimentOutput(
        samples=samples,
        plotdata=plotdata,
        report=report,
        report_sources=sources,
        manifest_extra={"abc": result.manifest, "standardize": abc_config.psvm.standardize},
    )
