"""LLM backends and token estimation."""

from .base import ChatMessage, ChatRequest, ChatResponse, LLMBackend, complete
from .scripted import ScriptedBackend, ScriptedPolicy
from .live import LiveChatBackend, resolve_credentials
from .tokens import TokenEstimator, estimate_tokens, tiktoken_estimator

__all__ = [
    "ChatMessage",
    "ChatRequest",
    "ChatResponse",
    "LLMBackend",
    "complete",
    "ScriptedBackend",
    "ScriptedPolicy",
    "LiveChatBackend",
    "resolve_credentials",
    "TokenEstimator",
    "estimate_tokens",
    "tiktoken_estimator",
]
