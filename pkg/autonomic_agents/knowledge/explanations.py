"""End-of-run decision rationales."""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from ..models.domain import RoundClock
from ..utils.exceptions import PhaseError


@dataclass(frozen=True)
class Explanation:
    agent: str
    text: str

    @property
    def empty(self) -> bool:
        return not self.text.strip()

    def to_dict(self) -> Dict[str, Any]:
        return {"text": self.text, "empty": self.empty}


class ExplanationLog:
    """Explanations keyed by agent, accepted only once every round has run."""

    def __init__(self) -> None:
        self._explanations: Dict[str, Explanation] = {}
        self.logger = logging.getLogger(__name__)

    def record_explanation(self, agent: str, text: str, clock: RoundClock) -> Explanation:
        """Store ``text`` verbatim for ``agent``.

        Args:
            agent: Explaining agent
            text: Raw model output; may be empty
            clock: Run clock, which must have reached ``clock.total``

        Returns:
            The stored Explanation

        Raises:
            PhaseError: If rounds are still running
        """
        if clock.current != clock.total:
            raise PhaseError(clock.current, clock.total)
        explanation = Explanation(agent, text)
        if explanation.empty:
            self.logger.warning(f"{agent} returned an empty explanation")
        self._explanations[agent] = explanation
        return explanation

    def get(self, agent: str) -> Optional[Explanation]:
        return self._explanations.get(agent)

    @property
    def agents(self) -> List[str]:
        return sorted(self._explanations)

    def __len__(self) -> int:
        return len(self._explanations)

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return {agent: self._explanations[agent].to_dict() for agent in self.agents}
