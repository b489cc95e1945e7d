import logging
import sys
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from abc_engine.export import write_csv
from cli.config_loader import load_config, load_psvm_config
from config.config import THREADS
from errors.errors import ConfigurationError, NumericalError, PsvmAbcError, SchemaError
from psvm.map_io import read_map, write_map
from psvm.psvm import evaluate_summaries, fit_psvm
from runner.experiment_runner import ExperimentRunner

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _fail(error: PsvmAbcError) -> int:
    print(f"error: {error}", file=sys.stderr)
    return error.exit_code


# numeric failures raised by numpy or scipy outside the package's own checks
NUMERIC_FAILURES = (np.linalg.LinAlgError, FloatingPointError, ValueError)


def _fail_numeric(error: Exception) -> int:
    logger.debug("Unwrapped numeric failure", exc_info=error)
    return _fail(NumericalError(f"{type(error).__name__}: {error}"))


def read_table(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"data file {path} does not exist")
    try:
        return pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise SchemaError(f"cannot read {path}: {e}") from e


def split_columns(frame: pd.DataFrame, with_theta: bool) -> Tuple[Optional[np.ndarray], np.ndarray]:
    """Check the `theta,x_1..x_n` (fit) or `x_1..x_n` (summarize) header and split the table."""
    columns = list(frame.columns)
    theta = None
    if with_theta:
        if not columns or columns[0] != "theta":
            raise SchemaError(f"first column must be 'theta', found {columns[:1]}")
        columns = columns[1:]
    expected = [f"x_{j}" for j in range(1, len(columns) + 1)]
    if not columns or columns != expected:
        raise SchemaError(f"data columns must be x_1..x_n in order, found {columns}")
    try:
        values = frame[columns].to_numpy(dtype=float)
        if with_theta:
            theta = frame["theta"].to_numpy(dtype=float)
    except ValueError as e:
        raise SchemaError(f"non-numeric values in data: {e}") from e
    if not np.all(np.isfinite(values)) or (theta is not None and not np.all(np.isfinite(theta))):
        raise SchemaError("data contain missing or non-finite values")
    return theta, values


def cmd_run(
    config_path: PathLike,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
    output_dir: Optional[PathLike] = None,
) -> int:
    try:
        config = load_config(config_path, seed=seed)
        runner = ExperimentRunner(config, threads=threads or THREADS, output_dir=output_dir)
        runner.run()
    except PsvmAbcError as e:
        return _fail(e)
    except NUMERIC_FAILURES as e:
        return _fail_numeric(e)
    return 0


def cmd_fit(
    data_path: PathLike,
    map_path: PathLike,
    config_path: Optional[PathLike] = None,
    summaries_path: Optional[PathLike] = None,
    threads: Optional[int] = None,
) -> int:
    """Fit an SDRMap on a `theta,x_1..x_n` table and write the PSVMMAP1 container."""
    try:
        psvm_config = load_psvm_config(config_path)
        theta, X = split_columns(read_table(data_path), with_theta=True)
        sdr_map = fit_psvm(theta, X, psvm_config, threads=threads or THREADS)
        write_map(sdr_map, map_path)
        if summaries_path is not None:
            write_csv(_summary_table(sdr_map.training_summaries()), summaries_path)
    except PsvmAbcError as e:
        return _fail(e)
    except NUMERIC_FAILURES as e:
        return _fail_numeric(e)
    return 0


def _summary_table(summaries: np.ndarray) -> pd.DataFrame:
    return pd.DataFrame({f"summary_{j + 1}": summaries[:, j] for j in range(summaries.shape[1])})


def cmd_summarize(data_path: PathLike, map_path: PathLike, output_path: Optional[PathLike] = None) -> int:
    """Append summary_1..summary_d to an `x_1..x_n` table."""
    try:
        sdr_map = read_map(map_path)
        frame = read_table(data_path)
        _, X = split_columns(frame, with_theta=False)
        if X.shape[1] != sdr_map.dim:
            raise SchemaError(f"table has {X.shape[1]} data columns, the map expects {sdr_map.dim}")
        summaries = evaluate_summaries(sdr_map, X)
        result = pd.concat([frame, _summary_table(summaries)], axis=1)
        if output_path is None:
            result.to_csv(sys.stdout, index=False, float_format="%.17g", lineterminator="\n")
        else:
            write_csv(result, output_path)
    except PsvmAbcError as e:
        return _fail(e)
    except NUMERIC_FAILURES as e:
        return _fail_numeric(e)
    return 0
