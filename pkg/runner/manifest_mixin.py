import json
import logging
import subprocess
from importlib import metadata
from pathlib import Path
from typing import Any, Dict

from config.version import version
from experiments.output import ExperimentOutput

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"
TRACKED_PACKAGES = ("numpy", "scipy", "pandas", "pydantic", "python-dotenv")


def package_versions() -> Dict[str, str]:
    versions = {}
    for package in TRACKED_PACKAGES:
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            versions[package] = "not installed"
    return versions


def git_describe() -> str:
    try:
        completed = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            capture_output=True,
            text=True,
            timeout=10,
            cwd=Path(__file__).resolve().parent.parent,
        )
    except (OSError, subprocess.SubprocessError) as e:
        logger.debug(f"git describe unavailable: {e}")
        return "unknown"
    return completed.stdout.strip() if completed.returncode == 0 else "unknown"


class ManifestMixin:
    def build_manifest(self, output: ExperimentOutput) -> Dict[str, Any]:
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "threads": self.threads,
            "config": self.config.model_dump(mode="json"),
            "application_version": version,
            "package_versions": package_versions(),
            "git_describe": git_describe(),
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "outputs": sorted(str(path.relative_to(self.output_dir)) for path in self.written),
            "details": output.manifest_extra,
        }

    def write_manifest(self, output: ExperimentOutput) -> Path:
        path = self.output_dir / MANIFEST_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps(self.build_manifest(output), indent=2, sort_keys=True, default=str) + "\n",
            encoding="utf-8",
            newline="\n",
        )
        logger.info(f"Wrote manifest to {path}")
        return path

    def delete_manifest(self) -> None:
        self.remove_paths([self.output_dir / MANIFEST_FILE])
