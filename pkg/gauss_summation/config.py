"""Configuration management for gauss_summation."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

from gauss_summation.exceptions import ArgumentError

logger = logging.getLogger(__name__)

CACHE_DIR_ENV = "GAUSS_SUMMATION_CACHE_DIR"

DEFAULT_CONFIG: Dict[str, Any] = {
    "tolerance": 1e-12,
    "n_max": 64,
    "output_format": "csv",
    "cache_dir": "~/.cache/gauss_summation",
    "use_cache": True,
    "log_level": "WARNING",
    "max_workers": 4,
}


class Config:
    """Manages application configuration.

    Precedence, lowest first: defaults, config file, environment, CLI arguments.
    """

    DEFAULT_CONFIG = DEFAULT_CONFIG

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        """Initialize configuration.

        Args:
            config_path: Path to config file. If None, uses default location.
        """
        self.config_path = (
            Path(config_path) if config_path else self._get_default_config_path()
        )
        self.config = self._load_config()

    def _get_default_config_path(self) -> Path:
        """Get the default configuration file path."""
        return Path.home() / ".gauss_summation_config.json"

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file, creating default if not exists."""
        config = self.DEFAULT_CONFIG.copy()

        if self.config_path.exists():
            try:
                with open(self.config_path, "r", encoding="utf-8") as f:
                    file_config = json.load(f)
                config.update(file_config)
                logger.info(f"Loaded configuration from {self.config_path}")
            except (OSError, ValueError) as e:
                logger.warning(f"Failed to load config from {self.config_path}: {e}")
        else:
            try:
                self.config_path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.config_path, "w", encoding="utf-8") as f:
                    json.dump(config, f, indent=2)
                logger.info(f"Created default configuration at {self.config_path}")
            except OSError as e:
                logger.warning(f"Failed to create config file: {e}")

        env_cache_dir = os.environ.get(CACHE_DIR_ENV)
        if env_cache_dir:
            config["cache_dir"] = env_cache_dir

        return config

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value, interpreting 'true'/'false' as booleans."""
        value = self.config.get(key, default)
        if isinstance(value, str):
            if value.lower() == "true":
                return True
            if value.lower() == "false":
                return False
        return value

    def set(self, key: str, value: Any) -> None:
        """Set a configuration value, coerced to the type of its default.

        Raises:
            ArgumentError: unknown key or value of the wrong type
        """
        if key not in self.DEFAULT_CONFIG:
            raise ArgumentError(f"Unknown configuration key: {key}")
        self.config[key] = self._coerce(key, value)

    def _coerce(self, key: str, value: Any) -> Any:
        default = self.DEFAULT_CONFIG[key]
        if not isinstance(value, str):
            return value
        try:
            if isinstance(default, bool):
                if value.lower() not in ("true", "false"):
                    raise ValueError(value)
                return value.lower() == "true"
            if isinstance(default, int):
                return int(value)
            if isinstance(default, float):
                return float(value)
        except ValueError:
            raise ArgumentError(
                f"Invalid value for {key}: {value!r} "
                f"(expected {type(default).__name__})"
            ) from None
        return value

    def save(self) -> None:
        """Save current configuration to file."""
        try:
            with open(self.config_path, "w", encoding="utf-8") as f:
                json.dump(self.config, f, indent=2)
            logger.info(f"Saved configuration to {self.config_path}")
        except OSError as e:
            logger.error(f"Failed to save configuration: {e}")

    def reset(self) -> None:
        """Restore the default configuration."""
        self.config = self.DEFAULT_CONFIG.copy()

    def merge_cli_args(self, args: Dict[str, Any]) -> None:
        """Merge CLI arguments with config (CLI takes precedence)."""
        for key, value in args.items():
            if value is not None:
                self.config[key] = value

    def get_cache_dir(self) -> Path:
        """Get the rule cache directory."""
        return Path(str(self.config.get("cache_dir"))).expanduser()

    def get_output_format(self) -> str:
        """Get the output format preference."""
        return str(self.config.get("output_format", "csv"))
