import logging
from pathlib import Path

from abc_engine.export import write_csv
from experiments.output import ExperimentOutput

logger = logging.getLogger(__name__)

SAMPLES_FILE = "samples.csv"


class SamplesMixin:
    def write_samples(self, output: ExperimentOutput) -> Path:
        """samples.csv never depends on the thread count or the clock."""
        path = write_csv(output.samples, self.output_dir / SAMPLES_FILE)
        self.samples_path = path
        return path

    def delete_samples(self) -> None:
        self.remove_paths([self.output_dir / SAMPLES_FILE])
