"""Per-agent interaction history and token-budgeted knowledge windows."""

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..llm.tokens import TokenEstimator, estimate_tokens
from ..utils.exceptions import OutOfOrderRoundError


class EntryKind(Enum):
    SENT = "sent"
    RECEIVED = "received"
    ACTION_TAKEN = "action_taken"
    OBSERVATION = "observation"


def one_line(text: str) -> str:
    """Collapse all whitespace runs (newlines included) into single spaces."""
    return " ".join(text.split())


@dataclass(frozen=True)
class HistoryEntry:
    round: int
    kind: EntryKind
    text: str
    tokens: int = -1

    def __post_init__(self) -> None:
        if self.round < 0:
            raise ValueError(f"round must be non-negative, got {self.round}")
        if self.text != one_line(self.text):
            raise ValueError("History entry text must be a canonical single line")
        if self.tokens < 0:
            object.__setattr__(self, "tokens", estimate_tokens(self.render()))

    @classmethod
    def create(
        cls,
        round: int,
        kind: EntryKind,
        text: str,
        estimator: TokenEstimator = estimate_tokens,
    ) -> "HistoryEntry":
        """Build an entry from free text, normalizing it to one line."""
        text = one_line(text)
        return cls(round, kind, text, estimator(_render(round, kind, text)))

    def render(self) -> str:
        """Prompt line for this entry."""
        return _render(self.round, self.kind, self.text)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "round": self.round,
            "kind": self.kind.value,
            "text": self.text,
            "tokens": self.tokens,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HistoryEntry":
        return cls(int(data["round"]), EntryKind(data["kind"]), data["text"], int(data["tokens"]))


def _render(round: int, kind: EntryKind, text: str) -> str:
    return f"[iteration {round + 1}] {kind.value}: {text}"


@dataclass(frozen=True)
class KnowledgeWindow:
    """Immutable suffix of a history whose token sum fits ``budget``."""
    entries: Sequence[HistoryEntry]
    budget: int

    @property
    def tokens(self) -> int:
        return sum(entry.tokens for entry in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def render(self) -> str:
        return "\n".join(entry.render() for entry in self.entries)

    def drop_oldest(self) -> "KnowledgeWindow":
        return KnowledgeWindow(tuple(self.entries[1:]), self.budget)


def window(entries: Sequence[HistoryEntry], budget: int) -> KnowledgeWindow:
    """Longest suffix of ``entries`` whose token sum is at most ``budget``.

    Scans from the newest entry backwards and stops at the first entry that does not
    fit, so the result is always contiguous. May be empty.
    """
    if budget < 1:
        raise ValueError(f"budget must be at least 1, got {budget}")
    spent = 0
    start = len(entries)
    for index in range(len(entries) - 1, -1, -1):
        cost = entries[index].tokens
        if spent + cost > budget:
            break
        spent += cost
        start = index
    return KnowledgeWindow(tuple(entries[start:]), budget)


class AgentHistory:
    """Append-only memory of one agent. Only windows are ever truncated."""

    def __init__(self, owner: str, estimator: TokenEstimator = estimate_tokens):
        self.owner = owner
        self.estimator = estimator
        self._entries: List[HistoryEntry] = []

    @property
    def entries(self) -> List[HistoryEntry]:
        return list(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def last_round(self) -> Optional[int]:
        return self._entries[-1].round if self._entries else None

    def append(self, entry: HistoryEntry) -> "AgentHistory":
        """Append ``entry``; raises OutOfOrderRoundError if it is older than the last one."""
        last = self.last_round
        if last is not None and entry.round < last:
            raise OutOfOrderRoundError(entry.round, last)
        self._entries.append(entry)
        return self

    def record(self, round: int, kind: EntryKind, text: str) -> HistoryEntry:
        """Create an entry with this history's estimator and append it."""
        entry = HistoryEntry.create(round, kind, text, self.estimator)
        self.append(entry)
        return entry

    def window(self, budget: int) -> KnowledgeWindow:
        return window(self._entries, budget)

    def to_dict(self) -> Dict[str, Any]:
        return {"agent": self.owner, "entries": [e.to_dict() for e in self._entries]}

    def save(self, path: Union[str, Path]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)
        logging.getLogger(__name__).debug(f"History of {self.owner} saved to {path}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AgentHistory":
        history = cls(data["agent"])
        for item in data.get("entries", []):
            history.append(HistoryEntry.from_dict(item))
        return history
