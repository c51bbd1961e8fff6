"""Basic tests to verify project structure and imports."""

import pytest


def test_package_imports():
    """Test that main package components can be imported."""
    try:
        from autonomic_agents import Simulation, SimConfig, load_config, parse_action, run_simulation
        assert True
    except ImportError as e:
        pytest.fail(f"Failed to import main package components: {e}")


def test_core_imports():
    try:
        from autonomic_agents.core import AgentRuntime, BaseScenario, assemble_prompt
        from autonomic_agents.core.simulation import Simulation
        assert True
    except ImportError as e:
        pytest.fail(f"Failed to import core components: {e}")


def test_subpackage_imports():
    try:
        from autonomic_agents.config import ConfigManager, SimConfig
        from autonomic_agents.knowledge import AgentHistory, ExplanationLog
        from autonomic_agents.llm import LiveChatBackend, ScriptedBackend
        from autonomic_agents.marketplace import Ledger, detect_anomalies, determine_winners
        from autonomic_agents.messaging import MessageBus
        from autonomic_agents.reports import replay_transcript
        from autonomic_agents.batch import BatchRunner
        from autonomic_agents.utils import AuthError, ConfigurationError
        assert True
    except ImportError as e:
        pytest.fail(f"Failed to import subpackages: {e}")


def test_exception_hierarchy():
    from autonomic_agents.utils.exceptions import (
        AuthError,
        AutonomicAgentsError,
        BackendError,
        ConfigParseError,
        ConfigurationError,
        UnknownReceiverError,
        UnknownAgentError,
    )

    assert issubclass(ConfigParseError, ConfigurationError)
    assert issubclass(AuthError, BackendError)
    assert issubclass(UnknownReceiverError, UnknownAgentError)
    assert issubclass(BackendError, AutonomicAgentsError)


def test_version():
    import autonomic_agents

    assert autonomic_agents.__version__ == "1.0.0"
