"""Configuration classes for autonomic agent simulations."""

from dataclasses import dataclass, field, fields
from typing import List, Dict, Any, Optional
import hashlib
import json
import yaml
from pathlib import Path

from ..core.prompts import DEFAULT_TEMPLATES, ROLE_TEMPLATES, template_role
from ..models.domain import Role, is_agent_id

VALID_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
BACKEND_KINDS = {"scripted", "live"}
TOKENIZERS = {"bytes", "tiktoken"}

# Settings that change how a run executes but not what it produces
EXECUTION_FIELDS = ("output_dir", "parallel", "max_workers", "log_level", "log_file")


@dataclass
class AgentConfig:
    """One agent of the simulation."""

    id: str
    role: str
    model: str = "gpt-4"
    temperature: float = 0.7
    max_output_tokens: int = 256
    template: Optional[str] = None

    # Credentials override; falls back to LLM_API_KEY / LLM_API_BASE
    api_key: Optional[str] = None
    api_base: Optional[str] = None

    def __post_init__(self) -> None:
        if self.template is None and self.role in {r.value for r in Role}:
            self.template = DEFAULT_TEMPLATES[Role(self.role)]

    @property
    def role_enum(self) -> Role:
        return Role(self.role)

    def to_dict(self, include_secrets: bool = False) -> Dict[str, Any]:
        """Effective form. The key value itself is only included on request."""
        data = {
            "id": self.id,
            "role": self.role,
            "model": self.model,
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
            "template": self.template,
            "api_base": self.api_base,
            "api_key_override": self.api_key is not None,
        }
        if include_secrets:
            data["api_key"] = self.api_key
        return data

    def validate(self, path: str) -> List[str]:
        errors = []
        if not isinstance(self.id, str) or not is_agent_id(self.id):
            errors.append(f"{path}.id: invalid agent id {self.id!r}")
        if self.role not in {r.value for r in Role}:
            errors.append(f"{path}.role: must be 'seller' or 'buyer', got {self.role!r}")
        if not isinstance(self.model, str) or not self.model:
            errors.append(f"{path}.model: must be a non-empty string")
        if not isinstance(self.temperature, (int, float)) or not 0.0 <= self.temperature <= 2.0:
            errors.append(f"{path}.temperature: must be in [0, 2], got {self.temperature!r}")
        if not isinstance(self.max_output_tokens, int) or self.max_output_tokens < 1:
            errors.append(f"{path}.max_output_tokens: must be a positive integer")
        if self.template not in ROLE_TEMPLATES:
            errors.append(f"{path}.template: unknown template {self.template!r}")
        elif self.role in {r.value for r in Role} and template_role(self.template) is not Role(self.role):
            errors.append(f"{path}.template: {self.template!r} is not a {self.role} template")
        return errors


@dataclass
class BackendConfig:
    """Which model backend answers the agents."""

    kind: str = "scripted"
    script: Optional[str] = None
    default_reply: str = "NOOP"

    # Live backend settings
    max_retries: int = 3
    retry_delay: float = 1.0
    request_timeout: float = 60.0

    def validate(self) -> List[str]:
        errors = []
        if self.kind not in BACKEND_KINDS:
            errors.append(f"backend.kind: must be one of {sorted(BACKEND_KINDS)}, got {self.kind!r}")
        if self.kind == "scripted" and not self.script:
            errors.append("backend.script: required for the scripted backend")
        if not isinstance(self.max_retries, int) or self.max_retries < 0:
            errors.append("backend.max_retries: must be a non-negative integer")
        if not isinstance(self.retry_delay, (int, float)) or self.retry_delay < 0:
            errors.append("backend.retry_delay: must be non-negative")
        if not isinstance(self.request_timeout, (int, float)) or self.request_timeout <= 0:
            errors.append("backend.request_timeout: must be positive")
        return errors


@dataclass
class SimConfig:
    """Main configuration class for a simulation run."""

    agents: List[AgentConfig] = field(default_factory=list)
    rounds: int = 5
    backend: BackendConfig = field(default_factory=BackendConfig)

    # Token budgets
    history_budget: int = 3000
    context_budget: int = 6000
    tokenizer: str = "bytes"

    # Reproducibility and output
    seed: int = 0
    output_dir: str = "runs/latest"

    # Processing settings
    parallel: bool = False
    max_workers: int = 4

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None

    def to_dict(self, include_secrets: bool = False) -> Dict[str, Any]:
        """Convert configuration to dictionary with every default spelled out."""
        return {
            "agents": [agent.to_dict(include_secrets) for agent in self.agents],
            "rounds": self.rounds,
            "backend": dict(self.backend.__dict__),
            "history_budget": self.history_budget,
            "context_budget": self.context_budget,
            "tokenizer": self.tokenizer,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "parallel": self.parallel,
            "max_workers": self.max_workers,
            "log_level": self.log_level,
            "log_file": self.log_file,
        }

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "SimConfig":
        """Create configuration from dictionary.

        Raises:
            ValueError: unknown keys or wrongly shaped sections, one message per problem
        """
        problems = _unknown_keys(cls, config_dict, "")
        backend_dict = config_dict.get("backend") or {}
        agent_dicts = config_dict.get("agents") or []
        if not isinstance(backend_dict, dict):
            problems.append("backend: must be an object")
            backend_dict = {}
        if not isinstance(agent_dicts, list):
            problems.append("agents: must be a list")
            agent_dicts = []
        problems.extend(_unknown_keys(BackendConfig, backend_dict, "backend."))

        agents = []
        for index, agent_dict in enumerate(agent_dicts):
            path = f"agents[{index}]"
            if not isinstance(agent_dict, dict):
                problems.append(f"{path}: must be an object")
                continue
            agent_dict = {k: v for k, v in agent_dict.items() if k != "api_key_override"}
            problems.extend(_unknown_keys(AgentConfig, agent_dict, f"{path}."))
            missing = [name for name in ("id", "role") if name not in agent_dict]
            problems.extend(f"{path}.{name}: required" for name in missing)
            if missing:
                continue
            known = {f.name for f in fields(AgentConfig)}
            agents.append(AgentConfig(**{k: v for k, v in agent_dict.items() if k in known}))
        if problems:
            raise ValueError("\n".join(problems))

        main_config = {k: v for k, v in config_dict.items() if k not in ("agents", "backend")}
        return cls(agents=agents, backend=BackendConfig(**backend_dict), **main_config)

    def save_to_file(self, file_path: str) -> None:
        """Save the effective configuration (JSON or YAML). Key values are never written."""
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        config_dict = self.to_dict()

        if path.suffix.lower() in (".yaml", ".yml"):
            with open(path, "w", encoding="utf-8") as f:
                yaml.safe_dump(config_dict, f, default_flow_style=False, indent=2, sort_keys=False)
        else:
            with open(path, "w", encoding="utf-8") as f:
                json.dump(config_dict, f, indent=2, ensure_ascii=False)

    @classmethod
    def load_from_file(cls, file_path: str) -> "SimConfig":
        """Load configuration from file (JSON or YAML)."""
        path = Path(file_path)

        if not path.exists():
            raise FileNotFoundError(f"Configuration file not found: {file_path}")

        with open(path, "r", encoding="utf-8") as f:
            if path.suffix.lower() in (".yaml", ".yml"):
                config_dict = yaml.safe_load(f)
            else:
                config_dict = json.load(f)

        return cls.from_dict(config_dict or {})

    def validate(self) -> List[str]:
        """Validate configuration and return list of errors."""
        errors = []

        if not isinstance(self.rounds, int) or self.rounds < 1:
            errors.append(f"rounds: must be an integer >= 1, got {self.rounds!r}")

        # Agents
        if not self.agents:
            errors.append("agents: at least one seller and one buyer are required")
        seen = set()
        for index, agent in enumerate(self.agents):
            errors.extend(agent.validate(f"agents[{index}]"))
            if agent.id in seen:
                errors.append(f"agents[{index}].id: duplicate agent id {agent.id!r}")
            seen.add(agent.id)
        roles = {agent.role for agent in self.agents}
        if self.agents and Role.SELLER.value not in roles:
            errors.append("agents: at least one seller is required")
        if self.agents and Role.BUYER.value not in roles:
            errors.append("agents: at least one buyer is required")

        errors.extend(self.backend.validate())

        # Budgets
        if not isinstance(self.history_budget, int) or self.history_budget < 1:
            errors.append("history_budget: must be a positive integer")
        if not isinstance(self.context_budget, int) or self.context_budget < 1:
            errors.append("context_budget: must be a positive integer")
        if self.tokenizer not in TOKENIZERS:
            errors.append(f"tokenizer: must be one of {sorted(TOKENIZERS)}")

        if not isinstance(self.seed, int):
            errors.append("seed: must be an integer")
        if not self.output_dir:
            errors.append("output_dir: must be non-empty")
        if not isinstance(self.max_workers, int) or self.max_workers < 1:
            errors.append("max_workers: must be at least 1")

        if self.log_level not in VALID_LOG_LEVELS:
            errors.append(f"log_level: invalid level {self.log_level!r}")

        return errors

    @property
    def agent_ids(self) -> List[str]:
        """Agent ids in canonical order."""
        return sorted(agent.id for agent in self.agents)

    def get_agent(self, agent_id: str) -> AgentConfig:
        for agent in self.agents:
            if agent.id == agent_id:
                return agent
        raise KeyError(agent_id)

    def outcome_dict(self) -> Dict[str, Any]:
        """Effective configuration without execution-only settings.

        This is what transcripts echo, so a parallel run and a sequential run of the same
        scenario, or the same scenario written to another directory, stay byte-identical.
        """
        return {k: v for k, v in self.to_dict().items() if k not in EXECUTION_FIELDS}

    def run_id(self) -> str:
        """Stable identifier derived from the effective configuration."""
        canonical = json.dumps(self.outcome_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _unknown_keys(cls: Any, data: Dict[str, Any], prefix: str) -> List[str]:
    known = {f.name for f in fields(cls)}
    return [f"{prefix}{key}: unknown field" for key in data if key not in known]
