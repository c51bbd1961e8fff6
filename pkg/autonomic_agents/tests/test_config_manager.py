"""Tests for configuration management."""

import json
import os
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest
import yaml

from .helpers import SCENARIOS_DIR
from ..config.manager import ConfigManager, load_config
from ..config.settings import AgentConfig, SimConfig
from ..utils.exceptions import ConfigParseError, ConfigValidationError

MINIMAL = {
    "agents": [{"id": "Agent1", "role": "seller"}, {"id": "Agent2", "role": "buyer"}],
    "backend": {"kind": "scripted", "script": "script.json"},
}


def write_config(directory, data, name="config.json"):
    path = Path(directory) / name
    with open(path, "w", encoding="utf-8") as f:
        if name.endswith((".yaml", ".yml")):
            yaml.safe_dump(data, f)
        else:
            json.dump(data, f)
    return path


class TestSimConfig:

    def test_defaults(self):
        config = SimConfig.from_dict(MINIMAL)
        assert config.rounds == 5
        assert config.history_budget == 3000
        assert config.context_budget == 6000
        assert config.agents[0].temperature == 0.7
        assert config.agents[0].model == "gpt-4"
        assert config.agents[0].template == "seller"
        assert config.agents[1].template == "buyer"
        assert config.backend.max_retries == 3

    def test_validate_requires_both_roles(self):
        data = dict(MINIMAL, agents=[{"id": "Agent1", "role": "seller"}])
        errors = SimConfig.from_dict(data).validate()
        assert "agents: at least one buyer is required" in errors

    def test_validate_field_paths(self):
        data = dict(MINIMAL, rounds=0, agents=[
            {"id": "Agent1", "role": "seller", "temperature": 3},
            {"id": "Agent1", "role": "buyer", "template": "seller"},
        ])
        errors = SimConfig.from_dict(data).validate()
        assert any(e.startswith("rounds:") for e in errors)
        assert any(e.startswith("agents[0].temperature") for e in errors)
        assert any(e.startswith("agents[1].id: duplicate") for e in errors)
        assert any(e.startswith("agents[1].template") for e in errors)

    def test_unknown_and_missing_fields(self):
        with pytest.raises(ValueError) as excinfo:
            SimConfig.from_dict(dict(MINIMAL, colour="blue", agents=[{"id": "Agent1"}]))
        message = str(excinfo.value)
        assert "colour: unknown field" in message
        assert "agents[0].role: required" in message

    def test_run_id_ignores_execution_settings(self):
        a = SimConfig.from_dict(MINIMAL)
        b = SimConfig.from_dict(dict(MINIMAL, parallel=True, output_dir="elsewhere", log_level="DEBUG"))
        c = SimConfig.from_dict(dict(MINIMAL, seed=1))
        assert a.run_id() == b.run_id()
        assert a.run_id() != c.run_id()
        assert len(a.run_id()) == 16
        assert "output_dir" not in a.outcome_dict()

    def test_secrets_not_written(self):
        config = SimConfig.from_dict(MINIMAL)
        config.agents[0].api_key = "sk-secret"
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "effective.json"
            config.save_to_file(str(path))
            text = path.read_text(encoding="utf-8")
            reloaded = SimConfig.load_from_file(str(path))
        assert "sk-secret" not in text
        assert '"api_key_override": true' in text
        assert reloaded.agents[0].api_key is None

    def test_agent_lookup(self):
        config = SimConfig.from_dict(MINIMAL)
        assert config.agent_ids == ["Agent1", "Agent2"]
        assert config.get_agent("Agent2").role == "buyer"
        with pytest.raises(KeyError):
            config.get_agent("Ghost")

    def test_agent_to_dict(self):
        data = AgentConfig(id="A", role="buyer", template="buyer_open").to_dict()
        assert data["template"] == "buyer_open"
        assert data["api_key_override"] is False


class TestConfigManager:

    def setup_method(self):
        self.config_manager = ConfigManager()

    def test_initialization(self):
        assert self.config_manager.config_path is None
        assert self.config_manager.ENV_PREFIX == "AUTONOMIC_"

    def test_no_path(self):
        with pytest.raises(ConfigParseError):
            self.config_manager.load_config()

    def test_missing_file(self):
        with pytest.raises(ConfigParseError):
            self.config_manager.load_config("/nonexistent/config.json")

    def test_malformed_file(self):
        with tempfile.NamedTemporaryFile(mode="w", suffix=".json", delete=False) as f:
            f.write("{\"agents\": [")
            path = f.name
        try:
            with pytest.raises(ConfigParseError):
                self.config_manager.load_config(path)
        finally:
            os.unlink(path)

    @patch.dict(os.environ, {}, clear=True)
    def test_load_json_resolves_script(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_config(tmp, MINIMAL)
            config = self.config_manager.load_config(path)
            assert Path(config.backend.script) == (Path(tmp) / "script.json").resolve()
            assert self.config_manager.get_config() is config

    @patch.dict(os.environ, {}, clear=True)
    def test_load_yaml(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_config(tmp, dict(MINIMAL, rounds=3), name="config.yaml")
            config = load_config(path)
        assert config.rounds == 3

    @patch.dict(os.environ, {}, clear=True)
    def test_zero_buyers_rejected(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_config(tmp, dict(MINIMAL, agents=[{"id": "Agent1", "role": "seller"}]))
            with pytest.raises(ConfigValidationError) as excinfo:
                self.config_manager.load_config(path)
        assert "agents: at least one buyer is required" in excinfo.value.config_errors

    @patch.dict(os.environ, {}, clear=True)
    def test_unknown_field_is_validation_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_config(tmp, dict(MINIMAL, turns=4))
            with pytest.raises(ConfigValidationError):
                self.config_manager.load_config(path)

    @patch.dict(os.environ, {
        "AUTONOMIC_ROUNDS": "3",
        "AUTONOMIC_BACKEND__MAX_RETRIES": "5",
        "AUTONOMIC_PARALLEL": "yes",
        "OTHER_ROUNDS": "9",
    }, clear=True)
    def test_env_overrides(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = self.config_manager.load_config(write_config(tmp, MINIMAL))
        assert config.rounds == 3
        assert config.backend.max_retries == 5
        assert config.parallel is True

    def test_parse_env_value(self):
        assert self.config_manager._parse_env_value("7") == 7
        assert self.config_manager._parse_env_value("off") is False
        assert self.config_manager._parse_env_value("runs/x") == "runs/x"

    def test_deep_merge(self):
        merged = self.config_manager._deep_merge({"a": {"b": 1, "c": 2}}, {"a": {"c": 3}})
        assert merged == {"a": {"b": 1, "c": 3}}

    @patch.dict(os.environ, {}, clear=True)
    @pytest.mark.parametrize("name", ["final_sale.json", "self_sale.json", "price_war.yaml", "live_smoke.json"])
    def test_bundled_scenarios_are_valid(self, name):
        config = ConfigManager(SCENARIOS_DIR / name).load_config()
        assert config.validate() == []
