"""CSV exports shared by the ABC engine, the models and the command line."""

import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from abc_engine.abc_engine import ABCResult

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Comma separated, header row, LF endings, floats with 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def samples_frame(result: ABCResult) -> pd.DataFrame:
    columns = {"index": np.arange(result.thetas.shape[0]), "theta": result.thetas}
    for j in range(result.summaries.shape[1]):
        columns[f"summary_{j + 1}"] = result.summaries[:, j]
    columns["distance"] = result.distances
    columns["accepted"] = result.accepted_mask.astype(int)
    return pd.DataFrame(columns)


def series_frame(values) -> pd.DataFrame:
    values = np.asarray(values, dtype=float).ravel()
    return pd.DataFrame({"index": np.arange(values.size), "value": values})


def path_frame(times, states) -> pd.DataFrame:
    return pd.DataFrame(
        {"time": np.asarray(times, dtype=float), "state": np.asarray(states, dtype=np.int64)}
    )
