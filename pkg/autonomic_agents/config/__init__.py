"""Configuration management for simulation runs."""

from .settings import AgentConfig, BackendConfig, SimConfig
from .manager import ConfigManager, load_config

__all__ = ["AgentConfig", "BackendConfig", "SimConfig", "ConfigManager", "load_config"]
