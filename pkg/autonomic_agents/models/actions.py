"""The action grammar: the constrained command language an agent's model output must follow.

One command per cycle. The first non-blank line of the model output is the command; any
lines after it are kept as rationale. Grammar (verbs are case-insensitive, agent ids are
case-sensitive, amounts are currency literals with at most two fractional digits)::

    SET_PRICE <amount>
    SEND <agent> <text...>
    OFFER <agent> <amount>
    QUERY_PRICE <agent>
    CONFIRM_SALE <buyer> <amount>
    ACCEPT <seller> <amount>
    EXPLAIN <text...>
    NOOP

Anything else degrades to NOOP with the raw output preserved and a diagnostic reason.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import Any, Dict, List, Optional, Union

from .domain import (
    AgentId,
    format_amount,
    is_agent_id,
    parse_amount,
    validate_agent_id,
    validate_amount,
)


class Verb(Enum):
    """Command verbs; the value is the canonical uppercase spelling."""
    SET_PRICE = "SET_PRICE"
    SEND = "SEND"
    OFFER = "OFFER"
    QUERY_PRICE = "QUERY_PRICE"
    CONFIRM_SALE = "CONFIRM_SALE"
    ACCEPT = "ACCEPT"
    EXPLAIN = "EXPLAIN"
    NOOP = "NOOP"


# Argument shapes per verb: "agent", "amount", "text" (rest of line).
VERB_ARGUMENTS: Dict[Verb, List[str]] = {
    Verb.SET_PRICE: ["amount"],
    Verb.SEND: ["agent", "text"],
    Verb.OFFER: ["agent", "amount"],
    Verb.QUERY_PRICE: ["agent"],
    Verb.CONFIRM_SALE: ["agent", "amount"],
    Verb.ACCEPT: ["agent", "amount"],
    Verb.EXPLAIN: ["text"],
    Verb.NOOP: [],
}

GRAMMAR_SYNOPSIS: Dict[Verb, str] = {
    Verb.SET_PRICE: "SET_PRICE <amount>",
    Verb.SEND: "SEND <agent> <text>",
    Verb.OFFER: "OFFER <seller> <amount>",
    Verb.QUERY_PRICE: "QUERY_PRICE <agent>",
    Verb.CONFIRM_SALE: "CONFIRM_SALE <buyer> <amount>",
    Verb.ACCEPT: "ACCEPT <seller> <amount>",
    Verb.EXPLAIN: "EXPLAIN <text>",
    Verb.NOOP: "NOOP",
}


@dataclass(frozen=True)
class ActionCommand:
    """A parsed, validated command.

    Equality covers the command itself (verb and arguments). ``rationale``, ``raw`` and
    ``reason`` describe where the command came from and do not take part in comparisons.
    """
    verb: Verb
    target: Optional[AgentId] = None
    amount: Optional[Decimal] = None
    text: Optional[str] = None
    rationale: Optional[str] = field(default=None, compare=False)
    raw: str = field(default="", compare=False)
    reason: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        shape = VERB_ARGUMENTS[self.verb]
        if ("agent" in shape) != (self.target is not None):
            raise ValueError(f"{self.verb.value} target mismatch")
        if ("amount" in shape) != (self.amount is not None):
            raise ValueError(f"{self.verb.value} amount mismatch")
        if ("text" in shape) != (self.text is not None):
            raise ValueError(f"{self.verb.value} text mismatch")
        if self.target is not None:
            validate_agent_id(self.target)
        if self.amount is not None:
            validate_amount(self.amount)
        if self.text is not None:
            if not self.text or self.text != self.text.strip() or len(self.text.splitlines()) != 1:
                raise ValueError("Command text must be a non-empty single trimmed line")

    @property
    def is_noop(self) -> bool:
        return self.verb is Verb.NOOP

    def to_dict(self) -> Dict[str, Any]:
        """Transcript form. ``command`` is the canonical rendering."""
        return {
            "command": render_action(self),
            "verb": self.verb.value,
            "target": self.target,
            "amount": format_amount(self.amount) if self.amount is not None else None,
            "text": self.text,
            "rationale": self.rationale,
            "raw": self.raw,
            "reason": self.reason,
        }


def noop(raw: str = "", reason: Optional[str] = None) -> ActionCommand:
    """Build the fallback command."""
    return ActionCommand(Verb.NOOP, raw=raw, reason=reason)


def render_action(cmd: ActionCommand) -> str:
    """Render the canonical single-line form of a command."""
    parts = [cmd.verb.value]
    for kind in VERB_ARGUMENTS[cmd.verb]:
        if kind == "agent":
            parts.append(str(cmd.target))
        elif kind == "amount":
            parts.append(format_amount(cmd.amount))  # type: ignore[arg-type]
        else:
            parts.append(str(cmd.text))
    return " ".join(parts)


def _first_line_and_rationale(text: str):
    lines = text.splitlines()
    for index, line in enumerate(lines):
        if line.strip():
            rest = "\n".join(lines[index + 1:]).strip()
            return line.strip(), (rest or None)
    return None, None


def parse_action(text: Union[str, bytes]) -> ActionCommand:
    """Translate model output into a command. Never raises.

    Byte input is decoded as UTF-8 with replacement characters; ``raw`` then holds the
    decoded text.
    """
    try:
        if isinstance(text, (bytes, bytearray)):
            text = bytes(text).decode("utf-8", errors="replace")
        elif not isinstance(text, str):
            text = str(text)
        return _parse(text)
    except Exception as e:  # the Execute stage must be total
        return noop(raw=text if isinstance(text, str) else "", reason=f"parser failure: {e}")


def _parse(raw: str) -> ActionCommand:
    line, rationale = _first_line_and_rationale(raw)
    if line is None:
        return noop(raw, "empty output")

    tokens = line.split(maxsplit=1)
    verb_token = tokens[0]
    remainder = tokens[1] if len(tokens) > 1 else ""

    try:
        verb = Verb(verb_token.upper())
    except ValueError:
        return noop(raw, "unrecognized verb")

    values: Dict[str, Any] = {}
    shape = VERB_ARGUMENTS[verb]
    for kind in shape:
        if kind == "text":
            if not remainder.strip():
                return noop(raw, f"missing text for {verb.value}")
            values["text"] = remainder.strip()
            remainder = ""
            break
        pieces = remainder.split(maxsplit=1)
        if not pieces:
            return noop(raw, f"missing {kind} for {verb.value}")
        token = pieces[0]
        remainder = pieces[1] if len(pieces) > 1 else ""
        if kind == "agent":
            if not is_agent_id(token):
                return noop(raw, f"invalid agent id {token!r}")
            values["target"] = token
        else:
            try:
                values["amount"] = parse_amount(token)
            except ValueError:
                return noop(raw, f"invalid amount {token!r}")
    if remainder.strip():
        return noop(raw, f"unexpected arguments for {verb.value}")

    return ActionCommand(verb=verb, rationale=rationale, raw=raw, **values)


def grammar_lines(verbs: Optional[List[Verb]] = None) -> List[str]:
    """Synopsis lines for the given verbs (all verbs by default), in grammar order."""
    selected = verbs if verbs is not None else list(Verb)
    return [GRAMMAR_SYNOPSIS[verb] for verb in Verb if verb in selected]
