"""Provider-agnostic chat exchange types and the backend interface."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

CHAT_ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in CHAT_ROLES:
            raise ValueError(f"Invalid chat role: {self.role}")

    def to_dict(self) -> Dict[str, str]:
        return {"role": self.role, "content": self.content}


@dataclass(frozen=True)
class ChatRequest:
    """One model call.

    ``agent`` and ``round`` identify the calling cycle. The live backend ignores them; the
    scripted backend keys its replies on them.
    """
    model: str
    temperature: float
    messages: List[ChatMessage]
    max_output_tokens: int = 256
    agent: Optional[str] = None
    round: Optional[int] = None

    def validate(self) -> List[str]:
        """Return a list of problems; empty when the request is valid."""
        errors = []
        if not self.model:
            errors.append("model must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            errors.append(f"temperature must be in [0, 2], got {self.temperature}")
        if not self.messages:
            errors.append("messages must be non-empty")
        elif self.messages[0].role != "system":
            errors.append("first message must have role 'system'")
        if self.max_output_tokens < 1:
            errors.append("max_output_tokens must be positive")
        return errors

    def to_wire(self) -> Dict[str, Any]:
        """Chat-completions request body."""
        return {
            "model": self.model,
            "temperature": self.temperature,
            "max_tokens": self.max_output_tokens,
            "messages": [m.to_dict() for m in self.messages],
        }


@dataclass(frozen=True)
class ChatResponse:
    content: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    backend_id: str = "unknown"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "content": self.content,
            "backend_id": self.backend_id,
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
        }


class LLMBackend(ABC):
    """Interface every model backend implements.

    Implementations must tolerate concurrent ``complete`` calls from several agents.
    """

    backend_id: str = "unknown"

    @abstractmethod
    def complete(self, request: ChatRequest) -> ChatResponse:
        """Perform one chat exchange.

        Raises:
            BackendError subclasses on failure.
        """
        pass

    def close(self) -> None:
        """Release resources held by the backend."""
        pass


def complete(backend: LLMBackend, request: ChatRequest) -> ChatResponse:
    """Validate ``request`` and delegate to ``backend``."""
    errors = request.validate()
    if errors:
        raise ValueError("Invalid chat request: " + "; ".join(errors))
    return backend.complete(request)
