"""Shared domain vocabulary: agent ids, roles, messages, currency and the round clock."""

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum
from typing import Any, Dict, Tuple

AgentId = str

AGENT_ID_PATTERN = re.compile(r"[A-Za-z0-9_-]+")
CURRENCY_PATTERN = re.compile(r"\$?(\d+)(?:\.(\d{1,2}))?", re.ASCII)

CENT = Decimal("0.01")
MIN_AMOUNT = Decimal("0.01")
MAX_AMOUNT = Decimal("1000000.00")
ZERO = Decimal("0.00")


def is_agent_id(name: str) -> bool:
    """Return True if ``name`` is a valid agent id token."""
    return bool(name) and AGENT_ID_PATTERN.fullmatch(name) is not None


def validate_agent_id(name: str) -> AgentId:
    """Return ``name`` unchanged or raise ValueError."""
    if not isinstance(name, str) or not is_agent_id(name):
        raise ValueError(f"Invalid agent id: {name!r}")
    return name


def parse_amount(literal: str) -> Decimal:
    """Parse a currency literal such as ``18``, ``17.5`` or ``$18.00``.

    Amounts are normalized to exactly two fractional digits. More than two fractional
    digits, signs, exponents and out-of-range values are rejected with ValueError.
    """
    match = CURRENCY_PATTERN.fullmatch(literal)
    if match is None:
        raise ValueError(f"Invalid currency literal: {literal!r}")
    whole, fraction = match.group(1), match.group(2) or ""
    try:
        amount = Decimal(f"{whole}.{fraction.ljust(2, '0')}")
    except InvalidOperation as e:
        raise ValueError(f"Invalid currency literal: {literal!r}") from e
    return validate_amount(amount)


def validate_amount(amount: Decimal) -> Decimal:
    """Check range and scale of a currency value and return it quantized to cents."""
    if not isinstance(amount, Decimal):
        raise ValueError(f"Currency must be Decimal, got {type(amount).__name__}")
    # range first: quantizing a huge value overflows the decimal context
    if not amount.is_finite() or amount < MIN_AMOUNT or amount > MAX_AMOUNT:
        raise ValueError(f"Currency out of range [{MIN_AMOUNT}, {MAX_AMOUNT}]: {amount}")
    try:
        quantized = amount.quantize(CENT)
    except InvalidOperation as e:
        raise ValueError(f"Invalid currency value: {amount}") from e
    if amount != quantized:
        raise ValueError(f"Currency has more than two fractional digits: {amount}")
    return quantized


def format_amount(amount: Decimal) -> str:
    """Render a currency value with exactly two fractional digits."""
    return f"{amount.quantize(CENT):.2f}"


class Role(Enum):
    """Marketplace role. Fixed for the whole run."""
    SELLER = "seller"
    BUYER = "buyer"


class Performative(Enum):
    """Intent tag carried by every message."""
    INFORM = "inform"
    PROPOSE = "propose"
    QUERY = "query"
    CONFIRM = "confirm"


@dataclass(frozen=True)
class Message:
    """A communication between two agents, delivered one round after it was sent.

    Self-addressed messages are valid; the bus flags them and anomaly detection
    reports them.
    """
    sender: AgentId
    receiver: AgentId
    performative: Performative
    body: str
    round_sent: int
    seq: int

    def __post_init__(self) -> None:
        validate_agent_id(self.sender)
        validate_agent_id(self.receiver)
        if not self.body or not self.body.strip():
            raise ValueError("Message body must be non-empty")
        if self.round_sent < 0:
            raise ValueError(f"round_sent must be non-negative, got {self.round_sent}")
        if self.seq < 0:
            raise ValueError(f"seq must be non-negative, got {self.seq}")

    @property
    def self_addressed(self) -> bool:
        return self.sender == self.receiver

    @property
    def delivery_key(self) -> Tuple[int, str, int]:
        """Canonical delivery order: round sent, then sender, then sequence number."""
        return (self.round_sent, self.sender, self.seq)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sender": self.sender,
            "receiver": self.receiver,
            "performative": self.performative.value,
            "body": self.body,
            "round_sent": self.round_sent,
            "seq": self.seq,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Message":
        return cls(
            sender=data["sender"],
            receiver=data["receiver"],
            performative=Performative(data["performative"]),
            body=data["body"],
            round_sent=int(data["round_sent"]),
            seq=int(data["seq"]),
        )


@dataclass(frozen=True)
class RoundClock:
    """Position of the run. ``current == total`` is the explanation phase."""
    current: int
    total: int

    def __post_init__(self) -> None:
        if self.total < 1:
            raise ValueError(f"total must be at least 1, got {self.total}")
        if not 0 <= self.current <= self.total:
            raise ValueError(f"current must be in [0, {self.total}], got {self.current}")

    @property
    def banner(self) -> str:
        """One-based iteration banner shown in every prompt."""
        return f"Iteration {self.current + 1} of {self.total}"

    @property
    def is_final_round(self) -> bool:
        return self.current == self.total - 1

    @property
    def in_explanation_phase(self) -> bool:
        return self.current == self.total

    def advance(self) -> "RoundClock":
        if self.in_explanation_phase:
            raise ValueError("The run has already reached its explanation phase")
        return RoundClock(self.current + 1, self.total)
