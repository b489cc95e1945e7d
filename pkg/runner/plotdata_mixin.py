import logging
from pathlib import Path
from typing import List

from abc_engine.export import write_csv
from experiments.output import ExperimentOutput

logger = logging.getLogger(__name__)


class PlotdataMixin:
    def write_plotdata(self, output: ExperimentOutput) -> List[Path]:
        self.plotdata_paths = []
        for name, frame in sorted(output.plotdata.items()):
            path = self.plotdata_dir / f"{name}.csv"
            self.plotdata_paths.append(path)
            write_csv(frame, path)
        return list(self.plotdata_paths)

    def delete_plotdata(self) -> None:
        self.remove_paths(getattr(self, "plotdata_paths", []))
        try:
            self.plotdata_dir.rmdir()
        except OSError:
            # not empty or never created
            pass
