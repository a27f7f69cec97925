"""Configuration for searches, suites and enumeration.

Settings come from a YAML file whose path is given explicitly or through the
``MOLQ_CONFIG`` environment variable; explicit overrides win over the file.
"""

import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

CONFIG_ENV_VAR = "MOLQ_CONFIG"


@dataclass(frozen=True)
class Settings:
    """Tunable limits and seeds."""

    budget: int = 1_000_000
    seed: int = 0
    samples: int = 200
    max_level: int = 4
    enumerate_samples: int = 16
    workers: int = 1

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"Setting {f.name!r} must be an integer, got {value!r}")
        if self.budget < 1 or self.samples < 0 or self.workers < 1:
            raise ValueError("budget and workers must be positive, samples non-negative")
        if not 0 <= self.max_level <= 6:
            raise ValueError(f"max_level must lie in [0, 6], got {self.max_level}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _read_yaml(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found at {path}")
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"Configuration file {path} must contain a mapping")
    return data


def load_settings(config_path: Optional[str] = None, **overrides) -> Settings:
    """Load settings from YAML, then apply non-None overrides.

    Args:
        config_path: YAML file; defaults to $MOLQ_CONFIG when set
        **overrides: Field values taking precedence over the file

    Raises:
        FileNotFoundError: If the configuration file does not exist
        ValueError: On unknown keys or invalid values
    """
    path = config_path or os.environ.get(CONFIG_ENV_VAR)
    data = _read_yaml(Path(path)) if path else {}

    known = {f.name for f in fields(Settings)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"Unknown configuration key(s): {', '.join(unknown)}")

    settings = Settings(**data)
    explicit = {k: v for k, v in overrides.items() if v is not None}
    unknown = sorted(set(explicit) - known)
    if unknown:
        raise ValueError(f"Unknown setting(s): {', '.join(unknown)}")
    return replace(settings, **explicit)
