"""Effects a scenario reports back to the control loop when it applies an action."""

from dataclasses import dataclass
from decimal import Decimal
from typing import Any, Dict

from .domain import AgentId, Performative, format_amount


@dataclass(frozen=True)
class ScenarioEvent:
    """Base class. ``record_type`` names the transcript record the event becomes."""

    record_type = "event"

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class OutgoingMessage(ScenarioEvent):
    """A message the acting agent wants sent; the loop stamps round and sequence number."""
    receiver: AgentId
    performative: Performative
    body: str

    record_type = "message"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "receiver": self.receiver,
            "performative": self.performative.value,
            "body": self.body,
        }


@dataclass(frozen=True)
class PriceUpdate(ScenarioEvent):
    """A seller changed its public price; published in the directory at the round barrier."""
    seller: AgentId
    price: Decimal

    record_type = "price"

    def to_dict(self) -> Dict[str, Any]:
        return {"seller": self.seller, "price": format_amount(self.price)}
