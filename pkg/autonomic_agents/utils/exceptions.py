"""Custom exceptions for the autonomic agents runtime."""

from typing import List, Optional


class AutonomicAgentsError(Exception):
    """Base exception for all runtime errors."""
    pass


class ConfigurationError(AutonomicAgentsError):
    """Base class for configuration problems (CLI exit status 2)."""
    pass


class ConfigParseError(ConfigurationError):
    """Raised when a configuration file cannot be read or decoded."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Cannot parse configuration {path}: {reason}")


class ConfigValidationError(ConfigurationError):
    """Raised when configuration values violate their constraints."""

    def __init__(self, message: str, config_errors: Optional[List[str]] = None):
        self.config_errors = config_errors or []
        if self.config_errors:
            message += ":\n" + "\n".join(f"  - {error}" for error in self.config_errors)
        super().__init__(message)


class MessagingError(AutonomicAgentsError):
    """Base class for message bus errors."""
    pass


class UnknownAgentError(MessagingError):
    """Raised when an agent id is not registered on the bus."""

    def __init__(self, agent_id: str):
        self.agent_id = agent_id
        super().__init__(f"Agent not registered: {agent_id}")


class UnknownReceiverError(UnknownAgentError):
    """Raised when a message names an unregistered receiver. The message is dropped."""
    pass


class StaleRoundError(MessagingError):
    """Raised when a message or inbox request is stamped with the wrong round."""

    def __init__(self, given_round: int, current_round: int):
        self.given_round = given_round
        self.current_round = current_round
        super().__init__(f"Round {given_round} is not the current round ({current_round})")


class BackendError(AutonomicAgentsError):
    """Base class for LLM backend failures."""

    def __init__(self, message: str, backend_id: str = "unknown"):
        self.backend_id = backend_id
        super().__init__(message)


class AuthError(BackendError):
    """Raised when credentials are missing or rejected (CLI exit status 3)."""
    pass


class RateLimitedError(BackendError):
    """Raised when the provider keeps answering 429 after all retries."""

    def __init__(self, attempts: int, backend_id: str = "unknown"):
        self.attempts = attempts
        super().__init__(f"Rate limited after {attempts} attempts", backend_id)


class MalformedProviderResponseError(BackendError):
    """Raised when the provider response does not follow the chat-completions schema."""
    pass


class BackendUnavailableError(BackendError):
    """Raised when transport errors or 5xx responses outlast the retries."""

    def __init__(self, attempts: int, last_error: str, backend_id: str = "unknown"):
        self.attempts = attempts
        self.last_error = last_error
        super().__init__(f"Backend unavailable after {attempts} attempts: {last_error}", backend_id)


class KnowledgeError(AutonomicAgentsError):
    """Base class for agent memory errors."""
    pass


class OutOfOrderRoundError(KnowledgeError):
    """Raised when a history entry is older than the last stored entry."""

    def __init__(self, entry_round: int, last_round: int):
        self.entry_round = entry_round
        self.last_round = last_round
        super().__init__(f"Entry round {entry_round} precedes last recorded round {last_round}")


class PhaseError(KnowledgeError):
    """Raised when an explanation is recorded before the run has ended."""

    def __init__(self, current_round: int, total_rounds: int):
        self.current_round = current_round
        self.total_rounds = total_rounds
        super().__init__(
            f"Explanations are accepted only after the last round "
            f"(current {current_round}, total {total_rounds})"
        )


class BudgetUnsatisfiableError(AutonomicAgentsError):
    """Raised when a prompt exceeds the context budget even without history."""

    def __init__(self, required_tokens: int, budget: int):
        self.required_tokens = required_tokens
        self.budget = budget
        super().__init__(
            f"Prompt needs {required_tokens} tokens without history; context budget is {budget}"
        )


class ReplayError(AutonomicAgentsError):
    """Raised when a transcript cannot be replayed."""
    pass
