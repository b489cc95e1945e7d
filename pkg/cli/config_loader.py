"""
Run configuration files: flat ``key = value`` lines under ``[section]`` headers.

    [experiment]
    experiment = ar1_abc
    seed = 20240101

    [psvm]
    h = 4

Every section maps onto a field of ExperimentConfig; unknown sections or keys
and missing required keys are reported by name.
"""

import configparser
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from pydantic import ValidationError

from errors.errors import ConfigurationError
from pydantic_models.models import ExperimentConfig, KernelSpec, PsvmConfig, PsvmSection, QpConfig

logger = logging.getLogger(__name__)


def _describe_error(error: Dict[str, Any]) -> str:
    location = [str(part) for part in error.get("loc", ())]
    if len(location) >= 2:
        where = f"[{location[0]}] {'.'.join(location[1:])}"
    elif location:
        where = f"[{location[0]}]"
    else:
        where = "config"
    if error.get("type") == "missing":
        return f"missing required key {where}"
    if error.get("type") == "extra_forbidden":
        return f"unknown key {where}"
    return f"{where}: {error.get('msg')}"


def load_config_mapping(sections: Mapping[str, Mapping[str, Any]], seed: Optional[int] = None) -> ExperimentConfig:
    data = {name: dict(values) for name, values in sections.items()}
    if seed is not None:
        data.setdefault("experiment", {})["seed"] = seed
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(_describe_error(error) for error in e.errors())
        logger.error(f"Invalid configuration: {problems}")
        raise ConfigurationError(problems) from e


def read_sections(path: Union[str, Path]) -> Dict[str, Dict[str, str]]:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file {path} does not exist")
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as e:
        raise ConfigurationError(f"cannot parse {path}: {e}") from e
    sections = {name: dict(parser.items(name)) for name in parser.sections()}
    logger.info(f"Loaded config {path} with sections {sorted(sections)}")
    return sections


def load_config(path: Union[str, Path], seed: Optional[int] = None) -> ExperimentConfig:
    return load_config_mapping(read_sections(path), seed=seed)


def load_psvm_config(path: Optional[Union[str, Path]] = None) -> PsvmConfig:
    """PSVM settings from the [kernel], [qp] and [psvm] sections; other sections are ignored."""
    if path is None:
        return PsvmConfig()
    sections = read_sections(path)
    try:
        return PsvmConfig(
            kernel=KernelSpec.model_validate(sections.get("kernel", {})),
            qp=QpConfig.model_validate(sections.get("qp", {})),
            **PsvmSection.model_validate(sections.get("psvm", {})).model_dump(),
        )
    except ValidationError as e:
        problems = "; ".join(_describe_error(error) for error in e.errors())
        logger.error(f"Invalid PSVM configuration: {problems}")
        raise ConfigurationError(problems) from e


def render_config(config: ExperimentConfig) -> str:
    """The resolved configuration as a config file that load_config reads back."""
    lines = []
    for section, values in config.model_dump(mode="json").items():
        lines.append(f"[{section}]")
        for key, value in values.items():
            if value is None:
                continue
            if isinstance(value, list):
                value = ", ".join(repr(float(item)) for item in value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)
