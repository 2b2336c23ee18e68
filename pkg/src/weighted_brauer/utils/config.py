import logging
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from weighted_brauer.errors import InvalidInputError

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS: Dict[str, Any] = {
    "jobs": 1,
    "basis_limit": 10 ** 6,
    "log_level": "WARNING",
    "sweep_chunksize": 4,
    "twist_limit": 10 ** 6,
}

ENV_OVERRIDES = {
    "WEIGHTED_BRAUER_JOBS": ("jobs", int),
    "WEIGHTED_BRAUER_BASIS_LIMIT": ("basis_limit", int),
    "WEIGHTED_BRAUER_LOG_LEVEL": ("log_level", str),
    "WEIGHTED_BRAUER_TWIST_LIMIT": ("twist_limit", int),
}


@dataclass(frozen=True)
class Settings:
    jobs: int = DEFAULT_SETTINGS["jobs"]
    basis_limit: int = DEFAULT_SETTINGS["basis_limit"]
    log_level: str = DEFAULT_SETTINGS["log_level"]
    sweep_chunksize: int = DEFAULT_SETTINGS["sweep_chunksize"]
    twist_limit: int = DEFAULT_SETTINGS["twist_limit"]


def _candidate_paths(config_path: Optional[str]) -> list[Path]:
    paths = []
    if config_path:
        paths.append(Path(config_path).expanduser())
    env_path = os.getenv("WEIGHTED_BRAUER_CONFIG")
    if env_path:
        paths.append(Path(env_path).expanduser())
    paths.append(Path("weighted_brauer.yml"))
    paths.append(Path.home() / ".config" / "weighted_brauer" / "config.yml")
    return paths


def _read_yaml(config_path: Optional[str]) -> Dict[str, Any]:
    """Read the first settings file that exists; problems are logged, not raised."""
    for path in _candidate_paths(config_path):
        if not path.exists():
            continue
        try:
            with open(path, "r") as f:
                loaded = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            logger.warning(f"Could not read settings file {path}: {e}")
            return {}
        if not isinstance(loaded, dict):
            logger.warning(f"Ignoring settings file {path}: top level is not a mapping")
            return {}
        logger.debug(f"Loaded settings from {path}")
        return loaded
    return {}


def load_settings(config_path: Optional[str] = None) -> Settings:
    """
    Resolve settings from defaults, an optional YAML file and environment overrides.

    Args:
        config_path: Explicit YAML file, searched before the default locations

    Returns:
        Frozen Settings instance
    """
    values = dict(DEFAULT_SETTINGS)
    from_file = _read_yaml(config_path)

    known = {f.name for f in fields(Settings)}
    unknown = sorted(set(from_file) - known)
    if unknown:
        raise InvalidInputError(f"Unknown settings: {', '.join(unknown)}")
    values.update(from_file)

    for env_name, (key, cast) in ENV_OVERRIDES.items():
        raw = os.getenv(env_name)
        if raw is None:
            continue
        try:
            values[key] = cast(raw)
        except ValueError:
            logger.warning(f"Ignoring {env_name}={raw!r}: not a valid {cast.__name__}")

    if int(values["jobs"]) < 1:
        raise InvalidInputError(f"jobs must be at least 1, got {values['jobs']}")
    if int(values["basis_limit"]) < 0:
        raise InvalidInputError(f"basis_limit must be nonnegative, got {values['basis_limit']}")
    if int(values["twist_limit"]) < 0:
        raise InvalidInputError(f"twist_limit must be nonnegative, got {values['twist_limit']}")

    return Settings(**values)
