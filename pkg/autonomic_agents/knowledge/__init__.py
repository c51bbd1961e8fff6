"""Agent memory: interaction histories, knowledge windows and explanations."""

from .history import AgentHistory, EntryKind, HistoryEntry, KnowledgeWindow, one_line, window
from .explanations import Explanation, ExplanationLog

__all__ = [
    "AgentHistory",
    "EntryKind",
    "HistoryEntry",
    "KnowledgeWindow",
    "one_line",
    "window",
    "Explanation",
    "ExplanationLog",
]
