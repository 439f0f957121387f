"""Layered PipelineConfig resolution: defaults < config file < environment < flags"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Mapping, Optional

from constants.settings_constants import SettingsConstants
from core.config import PipelineConfig, validate_config
from core.errors import ConfigValidationError

logger = logging.getLogger(__name__)


def env_var_for(field: str) -> str:
    return f"{SettingsConstants.PIPELINE_ENV_PREFIX}{field.upper()}"


def config_from_environment(environ: Optional[Mapping[str, str]] = None) -> dict[str, str]:
    """PIPELINE_<FIELD> variables for every PipelineConfig field that is set"""
    environ = os.environ if environ is None else environ
    found = {}
    for field in PipelineConfig.model_fields:
        value = environ.get(env_var_for(field))
        if value is not None and value != "":
            found[field] = value
    return found


def read_config_file(path: Path) -> dict[str, Any]:
    """
    Raises:
        ConfigValidationError: Unreadable file, bad JSON or not a JSON object
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigValidationError("config", f"cannot read config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigValidationError("config", f"config file {path} must hold a JSON object")
    return data


def load_pipeline_config(config_file: Optional[Path] = None,
                         overrides: Optional[Mapping[str, Any]] = None,
                         environ: Optional[Mapping[str, str]] = None,
                         cache_dir: Optional[Path] = None) -> PipelineConfig:
    """Resolve and validate a PipelineConfig

    Args:
        config_file: Optional JSON config file
        overrides: Flag values; None entries are ignored
        environ: Environment mapping, defaults to os.environ
        cache_dir: Settings-level cache directory, used when no layer sets one

    Raises:
        ConfigValidationError: Naming the first violated field
    """
    layers: dict[str, Any] = {}
    if cache_dir is not None:
        layers["cache_dir"] = cache_dir
    if config_file is not None:
        layers.update(read_config_file(config_file))
    layers.update(config_from_environment(environ))
    layers.update({key: value for key, value in (overrides or {}).items() if value is not None})
    config = validate_config(layers)
    logger.debug(f"Resolved config: {config.model_dump(mode='json')}")
    return config
