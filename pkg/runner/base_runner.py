import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

from pydantic_models.models import ExperimentConfig

logger = logging.getLogger(__name__)


class BaseRunner:
    def __init__(self, config: ExperimentConfig, threads: int = 1, output_dir: Optional[str] = None):
        """All of these attributes are available to each of the mixins"""
        self.config = config
        self.experiment = config.experiment.experiment
        self.seed = config.experiment.seed
        self.threads = max(int(threads), 1)
        self.output_dir = Path(output_dir or config.experiment.output_dir)
        self.plotdata_dir = self.output_dir / "plotdata"

        self.started_at: Optional[str] = None
        self.finished_at: Optional[str] = None
        self.written: List[Path] = []

        logger.info(
            f"Initializing runner for {self.experiment} with seed={self.seed}, "
            f"threads={self.threads}, output_dir={self.output_dir}"
        )

    @staticmethod
    def now() -> str:
        return datetime.now(timezone.utc).isoformat()

    def remove_paths(self, paths: List[Path]) -> None:
        for path in reversed(paths):
            try:
                path.unlink(missing_ok=True)
                logger.info(f"Removed partial output {path}")
            except OSError as e:
                logger.error(f"Failed to remove {path}: {e}")
