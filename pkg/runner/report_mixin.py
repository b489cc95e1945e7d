import logging
from pathlib import Path
from typing import Any, Dict, Sequence

import numpy as np

from experiments.output import ExperimentOutput

logger = logging.getLogger(__name__)

REPORT_FILE = "report.txt"


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def render_report(report: Dict[str, Any], sources: Sequence[str] = ()) -> str:
    header = f"# derived from {', '.join(sources)}\n" if sources else ""
    return header + "".join(f"{key} = {format_value(value)}\n" for key, value in report.items())


def parse_report(text: str) -> Dict[str, str]:
    entries = {}
    for line in text.splitlines():
        if line.strip() and not line.startswith("#"):
            key, _, value = line.partition(" = ")
            entries[key.strip()] = value.strip()
    return entries


class ReportMixin:
    def write_report(self, output: ExperimentOutput) -> Path:
        path = self.output_dir / REPORT_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(render_report(output.report, output.report_sources), encoding="utf-8", newline="\n")
        logger.info(f"Wrote {len(output.report)} report entries to {path}")
        return path

    def delete_report(self) -> None:
        self.remove_paths([self.output_dir / REPORT_FILE])
