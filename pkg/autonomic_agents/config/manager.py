"""Configuration manager for loading, overriding and validating simulation configs."""

import os
import logging
from pathlib import Path
from typing import Optional, Dict, Any, Union
import json
import yaml

from .settings import SimConfig
from ..utils.exceptions import ConfigParseError, ConfigValidationError


class ConfigManager:
    """Loads a simulation config file and turns it into a validated SimConfig."""

    ENV_PREFIX = "AUTONOMIC_"

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        self.config_path = Path(config_path) if config_path else None
        self.logger = logging.getLogger(__name__)
        self._config: Optional[SimConfig] = None

    def load_config(self, config_path: Optional[Union[str, Path]] = None) -> SimConfig:
        """Load, override, fill and validate a configuration.

        Args:
            config_path: Optional path overriding the one given at construction

        Returns:
            Validated SimConfig with every default filled in

        Raises:
            ConfigParseError: The file is missing, unreadable or not valid JSON/YAML
            ConfigValidationError: The content violates the config schema
        """
        if config_path:
            self.config_path = Path(config_path)
        if self.config_path is None:
            raise ConfigParseError("<none>", "no configuration file given")

        config_dict = self._load_file(self.config_path)
        config_dict = self._apply_env_overrides(config_dict)
        self._config = self.build_config(config_dict, base_dir=self.config_path.parent)

        self.logger.info(f"Configuration loaded successfully from {self.config_path}")
        return self._config

    def build_config(self, config_dict: Dict[str, Any], base_dir: Optional[Path] = None) -> SimConfig:
        """Turn a raw dictionary into a validated SimConfig.

        A relative script path is resolved against ``base_dir``.
        """
        try:
            config = SimConfig.from_dict(config_dict)
        except (TypeError, ValueError) as e:
            raise ConfigValidationError(
                "Configuration validation failed", str(e).splitlines()
            ) from e

        if config.backend.script and base_dir is not None:
            script = Path(config.backend.script)
            if not script.is_absolute():
                config.backend.script = str((base_dir / script).resolve())

        errors = config.validate()
        if errors:
            raise ConfigValidationError("Configuration validation failed", errors)
        return config

    def get_config(self) -> SimConfig:
        """Get current configuration, loading if necessary."""
        if self._config is None:
            return self.load_config()
        return self._config

    def save_config(self, config: SimConfig, file_path: Union[str, Path]) -> None:
        config.save_to_file(str(file_path))
        self.logger.info(f"Configuration saved to {file_path}")

    def _load_file(self, path: Path) -> Dict[str, Any]:
        if not path.exists():
            raise ConfigParseError(str(path), "file not found")
        try:
            with open(path, "r", encoding="utf-8") as f:
                if path.suffix.lower() in (".yaml", ".yml"):
                    data = yaml.safe_load(f)
                else:
                    data = json.load(f)
        except (OSError, UnicodeDecodeError, json.JSONDecodeError, yaml.YAMLError) as e:
            self.logger.error(f"Failed to load configuration from {path}: {e}")
            raise ConfigParseError(str(path), str(e)) from e

        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigParseError(str(path), "top level must be an object")
        return data

    def _apply_env_overrides(self, config_dict: Dict[str, Any]) -> Dict[str, Any]:
        """Apply environment variable overrides to configuration.

        Environment variables are prefixed with AUTONOMIC_ and use double underscores to
        separate nested keys. For example:
        - AUTONOMIC_ROUNDS -> rounds
        - AUTONOMIC_BACKEND__MAX_RETRIES -> backend.max_retries
        """
        env_overrides: Dict[str, Any] = {}

        for key, value in sorted(os.environ.items()):
            if not key.startswith(self.ENV_PREFIX):
                continue
            config_key = key[len(self.ENV_PREFIX):].lower()
            parts = config_key.split("__")
            current = env_overrides
            for part in parts[:-1]:
                current = current.setdefault(part, {})
            current[parts[-1]] = self._parse_env_value(value)
            self.logger.debug(f"Environment override {key}")

        return self._deep_merge(config_dict, env_overrides)

    def _parse_env_value(self, value: str) -> Any:
        """Parse environment variable value to appropriate type."""
        # JSON covers numbers, lists, objects, true/false and null
        try:
            return json.loads(value)
        except json.JSONDecodeError:
            pass

        if value.lower() in ("yes", "on"):
            return True
        if value.lower() in ("no", "off"):
            return False
        return value

    def _deep_merge(self, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Deep merge two dictionaries."""
        result = base.copy()

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._deep_merge(result[key], value)
            else:
                result[key] = value

        return result


def load_config(path: Union[str, Path]) -> SimConfig:
    """Load and validate the simulation config at ``path``."""
    return ConfigManager(path).load_config()
