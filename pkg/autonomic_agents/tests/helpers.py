"""Shared builders for the test suite."""

import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..config.manager import ConfigManager
from ..config.settings import AgentConfig, BackendConfig, SimConfig
from ..llm.base import ChatRequest, ChatResponse, LLMBackend
from ..llm.scripted import ScriptedBackend, ScriptedPolicy

SCENARIOS_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def scenario_config(name: str, output_dir: str) -> SimConfig:
    """Load a bundled scenario and point its output at ``output_dir``."""
    config = ConfigManager(SCENARIOS_DIR / name).load_config()
    config.output_dir = str(output_dir)
    return config


def make_config(
    sellers: List[str],
    buyers: List[str],
    rounds: int,
    output_dir: str,
    **overrides,
) -> SimConfig:
    """In-memory config for runs driven by an explicitly passed backend."""
    agents = [AgentConfig(id=a, role="seller") for a in sellers]
    agents += [AgentConfig(id=a, role="buyer") for a in buyers]
    config = SimConfig(
        agents=agents,
        rounds=rounds,
        backend=BackendConfig(kind="scripted", script="unused.json"),
        output_dir=str(output_dir),
    )
    for key, value in overrides.items():
        setattr(config, key, value)
    return config


def scripted(replies: Dict[Tuple[str, int], List[str]], default_reply: str = "NOOP") -> ScriptedBackend:
    return ScriptedBackend(ScriptedPolicy(replies, default_reply=default_reply))


def write_script(directory: Path, replies: Dict[str, Dict[str, str]], name: str = "script.json") -> Path:
    path = Path(directory) / name
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"replies": replies}, f)
    return path


class CountingBackend(LLMBackend):
    """Wraps another backend and records every request it sees."""

    def __init__(self, inner: LLMBackend):
        self.inner = inner
        self.requests: List[ChatRequest] = []
        self.backend_id = inner.backend_id

    def complete(self, request: ChatRequest) -> ChatResponse:
        self.requests.append(request)
        return self.inner.complete(request)


class FailingBackend(LLMBackend):
    """Raises ``error`` on every call."""

    backend_id = "failing"

    def __init__(self, error: Exception):
        self.error = error
        self.calls = 0

    def complete(self, request: ChatRequest) -> ChatResponse:
        self.calls += 1
        raise self.error


def read_lines(path: Path) -> List[dict]:
    with open(path, "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def find(records: List[dict], record_type: str, agent: Optional[str] = None) -> List[dict]:
    return [
        r for r in records
        if r["record_type"] == record_type and (agent is None or r["agent"] == agent)
    ]
