"""Round driver: runs every agent's cycle per round, then the explanation phase."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .agent import AgentRuntime, AgentSettings, CycleRecord, Perception
from .prompts import render_system_prompt
from ..config.settings import AgentConfig, SimConfig
from ..knowledge.explanations import ExplanationLog
from ..llm.base import LLMBackend
from ..llm.live import LiveChatBackend, resolve_credentials
from ..llm.scripted import ScriptedBackend, ScriptedPolicy
from ..llm.tokens import TokenEstimator, estimate_tokens, tiktoken_estimator
from ..marketplace.anomalies import detect_anomalies
from ..marketplace.ledger import AnomalyEvent, Settlement
from ..marketplace.scenario import MarketplaceScenario
from ..messaging.bus import MessageBus
from ..models.domain import RoundClock
from ..reports.report import build_report, write_report
from ..reports.transcript import TranscriptWriter

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_AUTH_ERROR = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

ProgressCallback = Callable[[str], None]


def configure_logging(level: str = "INFO", log_file: Optional[str] = None) -> logging.Logger:
    """Set the package log level and attach an optional file handler."""
    log_level = getattr(logging, level.upper())

    logger = logging.getLogger("autonomic_agents")
    logger.setLevel(log_level)

    if log_file:
        target = os.path.abspath(log_file)
        already = any(
            isinstance(h, logging.FileHandler) and h.baseFilename == target
            for h in logger.handlers
        )
        if not already:
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(log_level)
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
            logger.addHandler(file_handler)
    return logger


@dataclass
class SimulationResult:
    run_id: str
    output_dir: Path
    transcript_path: Path
    report_path: Path
    report: Dict
    exit_status: int
    cycles: List[CycleRecord] = field(default_factory=list)

    @property
    def anomalies(self) -> List[Dict]:
        return self.report["anomalies"]


class Simulation:
    """Drives a marketplace simulation from a validated SimConfig.

    Each round has two phases. First every agent collects its inbox, builds its prompt and
    calls its model; these calls touch only per-agent state and may run in a thread pool.
    Then, at the round barrier, commands are parsed, applied and sent one agent at a time
    in canonical (sorted id) order, so parallel and sequential runs write the same
    transcript.
    """

    def __init__(
        self,
        config: SimConfig,
        backend: Optional[LLMBackend] = None,
        progress: Optional[ProgressCallback] = None,
    ):
        self.config = config
        self.run_id = config.run_id()
        self.output_dir = Path(config.output_dir)
        self.progress = progress
        self.logger = logging.getLogger(__name__)

        self.bus = MessageBus()
        self.scenario = MarketplaceScenario()
        self.explanations = ExplanationLog()
        self._owned_backends: List[LLMBackend] = []
        self.estimator = self._create_estimator()

        self.agents: Dict[str, AgentRuntime] = {}
        for agent_config in sorted(config.agents, key=lambda a: a.id):
            agent_backend = backend or self._create_backend(agent_config)
            self._add_agent(agent_config, agent_backend)

    def _create_estimator(self) -> TokenEstimator:
        if self.config.tokenizer == "tiktoken":
            return tiktoken_estimator()
        return estimate_tokens

    def _create_backend(self, agent_config: AgentConfig) -> LLMBackend:
        """Build the backend for one agent. Scripted agents share one backend.

        Raises:
            AuthError: live backend without credentials
            ConfigParseError: unreadable script file
        """
        backend_config = self.config.backend
        if backend_config.kind == "scripted":
            for existing in self._owned_backends:
                if isinstance(existing, ScriptedBackend):
                    return existing
            policy = ScriptedPolicy.load(
                backend_config.script,
                seed=self.config.seed,
                default_reply=backend_config.default_reply,
            )
            created: LLMBackend = ScriptedBackend(policy)
        else:
            credentials = resolve_credentials(agent_config.api_key, agent_config.api_base)
            created = LiveChatBackend(
                api_key=credentials["api_key"],
                api_base=credentials["api_base"],
                timeout=backend_config.request_timeout,
                max_retries=backend_config.max_retries,
                retry_delay=backend_config.retry_delay,
            )
        self._owned_backends.append(created)
        return created

    def _add_agent(self, agent_config: AgentConfig, backend: LLMBackend) -> None:
        role = agent_config.role_enum
        self.bus.register(agent_config.id, role)
        self.scenario.register_agent(agent_config.id, role)
        settings = AgentSettings(
            model=agent_config.model,
            temperature=agent_config.temperature,
            max_output_tokens=agent_config.max_output_tokens,
            history_budget=self.config.history_budget,
            context_budget=self.config.context_budget,
        )
        system_prompt = render_system_prompt(
            agent_config.template, agent_config.id, self.config.rounds
        )
        self.agents[agent_config.id] = AgentRuntime(
            agent_config.id,
            role,
            self.scenario,
            self.bus,
            backend,
            system_prompt,
            settings,
            self.estimator,
        )
        self.logger.debug(f"Registered {role.value} {agent_config.id} ({agent_config.template})")

    def _report_progress(self, message: str) -> None:
        self.logger.info(message)
        if self.progress:
            self.progress(message)

    def run(self) -> SimulationResult:
        """Run every round, the explanation phase and the final report."""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        transcript_path = self.output_dir / "transcript.jsonl"
        cycles: List[CycleRecord] = []
        auth_failure = False

        self._report_progress(
            f"Run {self.run_id}: {len(self.agents)} agents, {self.config.rounds} rounds"
        )
        try:
            with TranscriptWriter(transcript_path, self.run_id) as writer:
                writer.write("config", 0, None, {"config": self.config.outcome_dict()})

                clock = RoundClock(0, self.config.rounds)
                while not clock.in_explanation_phase:
                    round_cycles = self._run_round(clock, writer)
                    cycles.extend(round_cycles)
                    self._check_round(clock)
                    self.bus.end_round()
                    self._report_progress(f"Finished {clock.banner}")
                    clock = clock.advance()

                explanation_errors = self._run_explanations(clock, writer)

                auth_failure = any(c.error_type == "AuthError" for c in cycles) or (
                    "AuthError" in explanation_errors
                )
                anomalies = detect_anomalies(writer.records)
                report = build_report(
                    run_id=self.run_id,
                    rounds=self.config.rounds,
                    agents={a: rt.role.value for a, rt in self.agents.items()},
                    ledger=self.scenario.ledger,
                    anomalies=anomalies,
                    explanations=self.explanations,
                    bus_stats=self.bus.stats(),
                    cycles=len(cycles),
                    backend_errors=sum(
                        1 for c in cycles
                        if c.response is None and c.error_type != "BudgetUnsatisfiableError"
                    ),
                    aborted_cycles=sum(1 for c in cycles if c.error_type == "BudgetUnsatisfiableError"),
                    auth_failure=auth_failure,
                    consistency=self.scenario.check_consistency(),
                )
                writer.write("report", self.config.rounds, None, report)
        finally:
            self.close()

        paths = write_report(self.output_dir, report)
        self.config.save_to_file(str(self.output_dir / "effective_config.json"))
        for agent_id, runtime in self.agents.items():
            runtime.history.save(self.output_dir / "histories" / f"{agent_id}.json")

        status = EXIT_AUTH_ERROR if auth_failure else EXIT_OK
        self._report_progress(
            f"Run {self.run_id} complete: {len(report['settlements'])} settlements, "
            f"{len(report['anomalies'])} anomalies"
        )
        return SimulationResult(
            run_id=self.run_id,
            output_dir=self.output_dir,
            transcript_path=transcript_path,
            report_path=paths["json"],
            report=report,
            exit_status=status,
            cycles=cycles,
        )

    def _run_round(self, clock: RoundClock, writer: TranscriptWriter) -> List[CycleRecord]:
        perceptions = self._perceive_all(clock)
        cycles = []
        for agent_id in sorted(self.agents):
            cycle = self.agents[agent_id].execute(perceptions[agent_id], clock)
            self._write_cycle(cycle, writer)
            cycles.append(cycle)
        return cycles

    def _perceive_all(self, clock: RoundClock) -> Dict[str, Perception]:
        agent_ids = sorted(self.agents)
        if self.config.parallel and len(agent_ids) > 1:
            with ThreadPoolExecutor(max_workers=self.config.max_workers) as executor:
                futures = {
                    agent_id: executor.submit(self.agents[agent_id].perceive, clock)
                    for agent_id in agent_ids
                }
                return {agent_id: future.result() for agent_id, future in futures.items()}
        return {agent_id: self.agents[agent_id].perceive(clock) for agent_id in agent_ids}

    def _write_cycle(self, cycle: CycleRecord, writer: TranscriptWriter) -> None:
        writer.write("cycle", cycle.round, cycle.agent, cycle.to_dict())
        writer.write("action", cycle.round, cycle.agent, {
            "role": self.agents[cycle.agent].role.value,
            "applied": cycle.error_type != "BudgetUnsatisfiableError",
            "action": cycle.action.to_dict(),
        })
        for event in cycle.events:
            if isinstance(event, (Settlement, AnomalyEvent)):
                writer.write(event.record_type, cycle.round, cycle.agent, event.to_dict())
        for bus_event in self.bus.drain_events():
            message = bus_event.message
            writer.write("message", message.round_sent, message.sender, bus_event.to_dict())

    def _check_round(self, clock: RoundClock) -> None:
        for problem in self.scenario.check_consistency():
            self.logger.error(f"Ledger inconsistency after round {clock.current}: {problem}")
        stats = self.bus.stats()
        in_flight = self.bus.pending_count()
        if stats.accepted != stats.delivered + in_flight:
            self.logger.error(
                f"Message conservation violated: {stats.accepted} accepted, "
                f"{stats.delivered} delivered, {in_flight} in flight"
            )

    def _run_explanations(self, clock: RoundClock, writer: TranscriptWriter) -> List[str]:
        """One extra model call per agent asking for a rationale of the whole run."""
        agent_ids = sorted(self.agents)
        if self.config.parallel and len(agent_ids) > 1:
            with ThreadPoolExecutor(max_workers=self.config.max_workers) as executor:
                futures = {a: executor.submit(self.agents[a].explain, clock) for a in agent_ids}
                results = {a: f.result() for a, f in futures.items()}
        else:
            results = {a: self.agents[a].explain(clock) for a in agent_ids}

        error_types = []
        for agent_id in agent_ids:
            result = results[agent_id]
            response = result["response"]
            text = response.content if response is not None else ""
            explanation = self.explanations.record_explanation(agent_id, text, clock)
            if result["error_type"]:
                error_types.append(result["error_type"])
            writer.write("explanation", clock.current, agent_id, {
                "prompt": result["prompt"].to_dict(),
                "response": response.to_dict() if response is not None else None,
                "text": explanation.text,
                "empty": explanation.empty,
                "error": result["error"],
            })
        self._report_progress(f"Collected {len(self.explanations)} explanations")
        return error_types

    def close(self) -> None:
        for backend in self._owned_backends:
            backend.close()
        self._owned_backends = []


def run_simulation(
    config: SimConfig,
    backend: Optional[LLMBackend] = None,
    progress: Optional[ProgressCallback] = None,
) -> SimulationResult:
    """Run one simulation and write its artifacts to ``config.output_dir``.

    Raises:
        AuthError: the live backend has no credentials
        ConfigurationError: the script file cannot be loaded
    """
    configure_logging(config.log_level, config.log_file)
    return Simulation(config, backend=backend, progress=progress).run()
