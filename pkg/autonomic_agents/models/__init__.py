"""Domain vocabulary and the action grammar."""

from .domain import (
    AgentId,
    Role,
    Performative,
    Message,
    RoundClock,
    parse_amount,
    format_amount,
    validate_agent_id,
)
from .actions import ActionCommand, Verb, parse_action, render_action, noop
from .events import ScenarioEvent, OutgoingMessage, PriceUpdate

__all__ = [
    "AgentId",
    "Role",
    "Performative",
    "Message",
    "RoundClock",
    "parse_amount",
    "format_amount",
    "validate_agent_id",
    "ActionCommand",
    "Verb",
    "parse_action",
    "render_action",
    "noop",
    "ScenarioEvent",
    "OutgoingMessage",
    "PriceUpdate",
]
