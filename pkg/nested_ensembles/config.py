"""
YAML run configuration.

A config file holds one section per CLI subcommand; its keys become that
subcommand's option defaults, so flags always win::

    run-swap:
      graph: house.json
      seed-plan: rows.csv
      steps: 100000
      rng: 7
"""

import os
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError

CONFIG_ENV = "NESTED_ENSEMBLES_CONFIG"


def default_config_path() -> str | None:
    value = os.getenv(CONFIG_ENV)
    return os.path.expanduser(value) if value else None


def load_config(path: str | Path, commands: set[str]) -> dict[str, Any]:
    """Parse a config file into a Click default_map (option names use underscores)"""
    try:
        with open(path, encoding="utf-8") as file:
            document = yaml.safe_load(file)
    except OSError as error:
        raise ConfigError(f"Cannot read config {path}: {error}") from error
    except UnicodeDecodeError as error:
        raise ConfigError(f"{path}: not UTF-8 text (byte {error.start})") from error
    except yaml.YAMLError as error:
        raise ConfigError(f"Invalid YAML in {path}: {error}") from error

    if document is None:
        return {}
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top level must be a mapping of subcommand sections")

    default_map: dict[str, Any] = {}
    for command, section in document.items():
        if command not in commands:
            raise ConfigError(f"{path}: unknown subcommand section {command!r} (known: {', '.join(sorted(commands))})")
        if not isinstance(section, dict):
            raise ConfigError(f"{path}: section {command!r} must be a mapping")
        default_map[command] = _option_names(section)
    return default_map


def _option_names(section: dict[str, Any]) -> dict[str, Any]:
    converted: dict[str, Any] = {}
    for key, value in section.items():
        if isinstance(value, dict):
            converted[str(key)] = _option_names(value)
        else:
            converted[str(key).replace("-", "_")] = value
    return converted
