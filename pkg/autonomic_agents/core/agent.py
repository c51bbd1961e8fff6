"""Autonomic agent runtime: one Monitor, LLM and Execute cycle per round."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from .base_scenario import BaseScenario
from .prompts import Prompt, assemble_prompt, compose_explanation_text, measure
from ..knowledge.history import AgentHistory, EntryKind, KnowledgeWindow
from ..llm.base import ChatMessage, ChatRequest, ChatResponse, LLMBackend, complete
from ..llm.tokens import TokenEstimator, estimate_tokens
from ..messaging.bus import DirectoryEntry, MessageBus
from ..models.actions import ActionCommand, noop, parse_action, render_action
from ..models.domain import AgentId, Message, Role, RoundClock, format_amount
from ..models.events import OutgoingMessage, PriceUpdate, ScenarioEvent
from ..utils.exceptions import BudgetUnsatisfiableError, PhaseError, UnknownReceiverError

STAGES = ("inbox", "prompt", "response", "action")


@dataclass(frozen=True)
class AgentSettings:
    model: str = "gpt-4"
    temperature: float = 0.7
    max_output_tokens: int = 256
    history_budget: int = 3000
    context_budget: int = 6000


@dataclass
class Perception:
    """Outcome of the Monitor and LLM stages, before anything touches shared state."""
    round: int
    inbox: List[Message]
    prompt: Optional[Prompt] = None
    response: Optional[ChatResponse] = None
    error: Optional[str] = None
    error_type: Optional[str] = None
    aborted: bool = False


@dataclass
class CycleRecord:
    """Everything one cycle did, in stage order."""
    agent: AgentId
    round: int
    stages: List[str]
    inbox: List[Message]
    prompt: Optional[Prompt]
    response: Optional[ChatResponse]
    action: ActionCommand
    events: List[ScenarioEvent] = field(default_factory=list)
    sent: List[Message] = field(default_factory=list)
    error: Optional[str] = None
    error_type: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Transcript payload of the ``cycle`` record."""
        return {
            "stages": list(self.stages),
            "inbox": [m.to_dict() for m in self.inbox],
            "prompt": self.prompt.to_dict() if self.prompt else None,
            "response": self.response.to_dict() if self.response else None,
            "action": self.action.to_dict(),
            "error": self.error,
        }


class AgentRuntime:
    """Self-managed agent wrapping one role in a scenario.

    The driver calls :meth:`perceive` for every agent (possibly in parallel), then
    :meth:`execute` for each agent in canonical order at the round barrier. :meth:`step`
    runs both back to back for a single agent.
    """

    def __init__(
        self,
        agent_id: AgentId,
        role: Role,
        scenario: BaseScenario,
        bus: MessageBus,
        backend: LLMBackend,
        system_prompt: str,
        settings: Optional[AgentSettings] = None,
        estimator: TokenEstimator = estimate_tokens,
    ):
        self.agent_id = agent_id
        self.role = role
        self.scenario = scenario
        self.bus = bus
        self.backend = backend
        self.system_prompt = system_prompt
        self.settings = settings or AgentSettings()
        self.estimator = estimator
        self.history = AgentHistory(agent_id, estimator)
        self.logger = logging.getLogger(f"{__name__}.{agent_id}")

    # Monitor

    def monitor(
        self,
        inbox: Sequence[Message],
        directory: Sequence[DirectoryEntry],
        clock: RoundClock,
    ) -> Prompt:
        """Compile state, directory, history window and inbox into one prompt.

        The history window starts at the history budget and loses its oldest entries
        until the whole prompt fits the context budget.

        Raises:
            BudgetUnsatisfiableError: the prompt does not fit even with no history.
        """
        if clock.in_explanation_phase:
            raise ValueError("monitor() is not available in the explanation phase")
        state = self.scenario.describe_state(self.agent_id)
        verbs = self.scenario.allowed_verbs(self.role)
        window = self._initial_window()
        while True:
            prompt = assemble_prompt(
                self.system_prompt, clock, state, directory, window, inbox, verbs, self.estimator
            )
            if prompt.tokens <= self.settings.context_budget:
                return prompt
            if not len(window):
                raise BudgetUnsatisfiableError(prompt.tokens, self.settings.context_budget)
            window = window.drop_oldest()

    def _initial_window(self) -> KnowledgeWindow:
        return self.history.window(min(self.settings.history_budget, self.settings.context_budget))

    # LLM stage

    def reason(self, prompt: Prompt, clock: RoundClock) -> ChatResponse:
        """One backend call with this agent's model settings. Backend errors propagate."""
        request = ChatRequest(
            model=self.settings.model,
            temperature=self.settings.temperature,
            messages=[ChatMessage("system", prompt.system), ChatMessage("user", prompt.user)],
            max_output_tokens=self.settings.max_output_tokens,
            agent=self.agent_id,
            round=clock.current,
        )
        return complete(self.backend, request)

    def perceive(self, clock: RoundClock) -> Perception:
        """Collect the inbox, build the prompt and ask the model.

        Touches only this agent's history and mailbox, so it may run concurrently with
        other agents' perceive calls.
        """
        inbox = self.bus.collect_inbox(self.agent_id, clock.current)
        directory = self.bus.directory_snapshot()
        perception = Perception(round=clock.current, inbox=inbox)

        try:
            perception.prompt = self.monitor(inbox, directory, clock)
        except BudgetUnsatisfiableError as e:
            self.logger.error(f"Cycle aborted in round {clock.current}: {e}")
            perception.error = f"budget unsatisfiable: {e}"
            perception.error_type = type(e).__name__
            perception.aborted = True
        else:
            try:
                perception.response = self.reason(perception.prompt, clock)
            except Exception as e:
                self.logger.error(f"Backend failure in round {clock.current}: {e}")
                perception.error = f"backend error: {type(e).__name__}: {e}"
                perception.error_type = type(e).__name__

        self.history.record(clock.current, EntryKind.OBSERVATION, "directory: " + _directory_line(directory))
        for message in inbox:
            self.history.record(
                clock.current,
                EntryKind.RECEIVED,
                f"from {message.sender} ({message.performative.value}): {message.body}",
            )
        return perception

    # Execute

    def execute(self, perception: Perception, clock: RoundClock) -> CycleRecord:
        """Turn the model output into a command, apply it and send the resulting messages."""
        stages = ["inbox"]
        if perception.prompt is not None:
            stages.append("prompt")
        if perception.response is not None:
            stages.append("response")
        stages.append("action")

        events: List[ScenarioEvent] = []
        sent: List[Message] = []
        if perception.response is not None:
            action = parse_action(perception.response.content)
        else:
            action = noop(raw="", reason=perception.error)

        if not perception.aborted:
            events = self.scenario.apply_action(self.agent_id, action, clock)
            for event in events:
                if isinstance(event, OutgoingMessage):
                    message = self._send(event)
                    if message is not None:
                        sent.append(message)
                elif isinstance(event, PriceUpdate):
                    self.bus.list_price(event.seller, event.price)

        summary = render_action(action)
        if action.is_noop and action.reason:
            summary += f" ({action.reason})"
        self.history.record(clock.current, EntryKind.ACTION_TAKEN, summary)
        self.logger.debug(f"Round {clock.current}: {summary}")

        return CycleRecord(
            agent=self.agent_id,
            round=clock.current,
            stages=stages,
            inbox=perception.inbox,
            prompt=perception.prompt,
            response=perception.response,
            action=action,
            events=events,
            sent=sent,
            error=perception.error,
            error_type=perception.error_type,
        )

    def _send(self, event: OutgoingMessage) -> Optional[Message]:
        message = self.bus.compose(self.agent_id, event.receiver, event.performative, event.body)
        try:
            self.bus.send(message)
        except UnknownReceiverError:
            return None
        self.history.record(
            message.round_sent,
            EntryKind.SENT,
            f"to {message.receiver} ({message.performative.value}): {message.body}",
        )
        return message

    def step(self, clock: RoundClock) -> CycleRecord:
        """Full cycle: collect_inbox, monitor, reason, execute."""
        return self.execute(self.perceive(clock), clock)

    # Explanation phase

    def explain(self, clock: RoundClock) -> Dict[str, Any]:
        """Ask the model for a rationale of the whole run.

        Returns:
            Dictionary with ``prompt``, ``response`` and ``error`` (any may be None)
        """
        if not clock.in_explanation_phase:
            raise PhaseError(clock.current, clock.total)
        state = self.scenario.describe_state(self.agent_id)
        window = self._initial_window()
        while True:
            user = compose_explanation_text(clock.total, state, window)
            tokens = measure(self.system_prompt, user, self.estimator)
            if tokens <= self.settings.context_budget or not len(window):
                break
            window = window.drop_oldest()
        prompt = Prompt(self.system_prompt, user, tokens, window)

        result: Dict[str, Any] = {"prompt": prompt, "response": None, "error": None, "error_type": None}
        if tokens > self.settings.context_budget:
            error = BudgetUnsatisfiableError(tokens, self.settings.context_budget)
            result["error"] = f"budget unsatisfiable: {error}"
            result["error_type"] = type(error).__name__
            return result
        try:
            result["response"] = self.reason(prompt, clock)
        except Exception as e:
            self.logger.error(f"Backend failure during explanation: {e}")
            result["error"] = f"backend error: {type(e).__name__}: {e}"
            result["error_type"] = type(e).__name__
        return result


def _directory_line(directory: Sequence[DirectoryEntry]) -> str:
    parts = []
    for entry in directory:
        if entry.role is Role.SELLER:
            price = format_amount(entry.listed_price) if entry.listed_price is not None else "unlisted"
            parts.append(f"{entry.agent} {price}")
    return "; ".join(parts) or "no sellers"
