from dataclasses import dataclass, field
from typing import Any, Dict, List

import pandas as pd


@dataclass
class ExperimentOutput:
    """Everything an experiment hands to the runner for writing."""

    samples: pd.DataFrame
    plotdata: Dict[str, pd.DataFrame] = field(default_factory=dict)
    report: Dict[str, Any] = field(default_factory=dict)
    report_sources: List[str] = field(default_factory=list)  # written files the report is computed from
    manifest_extra: Dict[str, Any] = field(default_factory=dict)
