import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Dict

from experiments import (
    ar1_abc_experiment,
    gamma_bvm_experiment,
    iep_limit_experiment,
    laplace_pivot_experiment,
    musq_bimodal_experiment,
    svm_robustness_experiment,
)
from experiments.output import ExperimentOutput
from runner.base_runner import BaseRunner
from runner.manifest_mixin import ManifestMixin
from runner.plotdata_mixin import PlotdataMixin
from runner.report_mixin import ReportMixin
from runner.samples_mixin import SamplesMixin

logger = logging.getLogger(__name__)

EXPERIMENTS: Dict[str, Callable[..., ExperimentOutput]] = {
    "ar1_abc": ar1_abc_experiment.run,
    "svm_robustness": svm_robustness_experiment.run,
    "gamma_bvm": gamma_bvm_experiment.run,
    "laplace_pivot": laplace_pivot_experiment.run,
    "iep_limit": iep_limit_experiment.run,
    "musq_bimodal": musq_bimodal_experiment.run,
}


@dataclass
class RunState:
    """Tracks which outputs have been written during a run"""

    samples_written: bool = False
    plotdata_written: bool = False
    report_written: bool = False
    manifest_written: bool = False


class ExperimentRunner(
    BaseRunner,
    SamplesMixin,
    PlotdataMixin,
    ReportMixin,
    ManifestMixin,
):
    def cleanup_outputs(self, state: RunState) -> None:
        """
        Remove written outputs in reverse order of creation
        """
        if state.manifest_written:
            self.delete_manifest()
        if state.report_written:
            self.delete_report()
        if state.plotdata_written:
            self.delete_plotdata()
        if state.samples_written:
            self.delete_samples()

    @contextmanager
    def run_context(self):
        """
        Track outputs as they are written and remove them if the run fails.
        """
        state = RunState()
        try:
            yield state
        except Exception as e:
            logger.error(f"Experiment {self.experiment} failed: {e}")
            self.cleanup_outputs(state)
            raise

    def run(self) -> ExperimentOutput:
        self.started_at = self.now()
        experiment = EXPERIMENTS[self.experiment]
        with self.run_context() as state:
            output = experiment(self.config, threads=self.threads)

            # flags go up before each write so a half-written file is still removed
            state.samples_written = True
            self.written.append(self.write_samples(output))

            state.plotdata_written = True
            self.written.extend(self.write_plotdata(output))

            state.report_written = True
            self.written.append(self.write_report(output))

            self.finished_at = self.now()
            state.manifest_written = True
            self.write_manifest(output)

        logger.info(f"Experiment {self.experiment} finished; outputs in {self.output_dir}")
        return output
