"""
Robustness of sliced SVM normal vectors.

theta | X ~ N(2 X1 + X2 + curvature (X1^2 + X2^2), noise_sd^2) with X ~ N(0, I_2),
sliced once at cut_point. Each replication contributes one normal vector; the
report gives per-replication cosines to (2, 1) / sqrt(5) and the principal
direction of all normals.
"""

import logging

import numpy as np
import pandas as pd

from abc_engine.streams import draw_stream
from experiments.output import ExperimentOutput
from kernel_core.kernel_core import symmetric_eigen
from psvm.linear_psvm import fit_linear_psvm
from pydantic_models.models import ExperimentConfig, LinearPsvmConfig, SvmRobustnessSection

logger = logging.getLogger(__name__)

REFERENCE_DIRECTION = np.array([2.0, 1.0]) / np.sqrt(5.0)
COSINE_THRESHOLD = 0.98


def simulate_robustness_data(section: SvmRobustnessSection, stream: np.random.Generator):
    X = stream.standard_normal((section.m, 2))
    signal = 2.0 * X[:, 0] + X[:, 1] + section.curvature * np.sum(X * X, axis=1)
    theta = signal + section.noise_sd * stream.standard_normal(section.m)
    return theta, X


def run(config: ExperimentConfig, threads: int = 1) -> ExperimentOutput:
    section = config.svm_robustness
    seed = config.experiment.seed
    psvm_config = LinearPsvmConfig(
        qp=config.qp,
        cost=section.cost,
        standardize=section.standardize,
        cut_points=[section.cut_point],
    )

    rows = []
    normals = []
    for replication in range(section.replications):
        theta, X = simulate_robustness_data(section, draw_stream(seed, "replication", replication))
        fitted = fit_linear_psvm(theta, X, psvm_config, threads=threads)
        normal = fitted.normals[0]
        unit = normal / np.linalg.norm(normal)
        cosine = float(abs(fitted.leading @ REFERENCE_DIRECTION))
        normals.append(unit)
        rows.append(
            {
                "replication": replication,
                "psi_1": unit[0],
                "psi_2": unit[1],
                "offset": float(fitted.offsets[0]),
                "abs_cosine": cosine,
                "passed": int(cosine >= COSINE_THRESHOLD),
            }
        )

    samples = pd.DataFrame(rows)
    stacked = np.array(normals)
    pooled = symmetric_eigen(stacked.T @ stacked).vectors[:, 0]
    pooled_cosine = float(abs(pooled @ REFERENCE_DIRECTION))
    passes = int(samples["passed"].sum())
    report = {
        "replications": section.replications,
        "cut_point": section.cut_point,
        "min_abs_cosine": float(samples["abs_cosine"].min()),
        "mean_abs_cosine": float(samples["abs_cosine"].mean()),
        "replications_passing": passes,
        "pooled_direction_1": float(pooled[0]),
        "pooled_direction_2": float(pooled[1]),
        "pooled_abs_cosine": pooled_cosine,
    }
    plotdata = {
        "normal_vectors": samples[["psi_1", "psi_2"]],
        "reference_line": pd.DataFrame(
            {"psi_1": [0.0, REFERENCE_DIRECTION[0]], "psi_2": [0.0, REFERENCE_DIRECTION[1]]}
        ),
    }
    logger.info(f"SVM robustness: {passes}/{section.replications} replications within cosine {COSINE_THRESHOLD}")
    return ExperimentOutput(samples=samples, plotdata=plotdata, report=report)
