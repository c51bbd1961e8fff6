"""Base scenario abstract class: the managed environment agents act upon."""

from abc import ABC, abstractmethod
from typing import Any, Dict, List

from ..models.actions import ActionCommand, Verb
from ..models.domain import AgentId, Role, RoundClock
from ..models.events import ScenarioEvent


class BaseScenario(ABC):
    """Abstract base class for scenarios driven by autonomic agents.

    A scenario owns the environment state. The control loop never mutates it directly;
    it hands each parsed command to :meth:`apply_action` at the round barrier and turns
    the returned events into bus traffic and transcript records.
    """

    def __init__(self, name: str):
        self.name = name
        self.roles: Dict[AgentId, Role] = {}

    def register_agent(self, agent: AgentId, role: Role) -> None:
        """Register an agent with the scenario.

        Args:
            agent: Agent identifier
            role: Role the agent plays
        """
        if agent in self.roles:
            raise ValueError(f"Agent already registered: {agent}")
        self.roles[agent] = role

    def role_of(self, agent: AgentId) -> Role:
        return self.roles[agent]

    @abstractmethod
    def describe_state(self, agent: AgentId) -> str:
        """Return the own-state summary shown to ``agent`` in its prompt.

        Args:
            agent: Agent the summary is for

        Returns:
            Multi-line text describing what the agent holds and has done
        """
        pass

    @abstractmethod
    def apply_action(
        self, agent: AgentId, action: ActionCommand, clock: RoundClock
    ) -> List[ScenarioEvent]:
        """Apply one command issued by ``agent``.

        Must never raise for a well-formed command: invalid attempts are reported as
        events instead.

        Args:
            agent: Acting agent
            action: Parsed command
            clock: Current round

        Returns:
            Events produced, in the order they happened
        """
        pass

    def allowed_verbs(self, role: Role) -> List[Verb]:
        """Verbs advertised to agents of ``role``. All verbs by default."""
        return list(Verb)

    def check_consistency(self) -> List[str]:
        """Return descriptions of broken scenario invariants; empty when consistent."""
        return []

    def summary(self) -> Dict[str, Any]:
        """Scenario outcome for the final report."""
        return {}
