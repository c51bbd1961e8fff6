"""Utility helpers and the exception hierarchy."""

from .exceptions import (
    AutonomicAgentsError,
    ConfigurationError,
    ConfigParseError,
    ConfigValidationError,
    MessagingError,
    UnknownAgentError,
    UnknownReceiverError,
    StaleRoundError,
    BackendError,
    AuthError,
    RateLimitedError,
    MalformedProviderResponseError,
    BackendUnavailableError,
    KnowledgeError,
    OutOfOrderRoundError,
    PhaseError,
    BudgetUnsatisfiableError,
    ReplayError,
)

__all__ = [
    "AutonomicAgentsError",
    "ConfigurationError",
    "ConfigParseError",
    "ConfigValidationError",
    "MessagingError",
    "UnknownAgentError",
    "UnknownReceiverError",
    "StaleRoundError",
    "BackendError",
    "AuthError",
    "RateLimitedError",
    "MalformedProviderResponseError",
    "BackendUnavailableError",
    "KnowledgeError",
    "OutOfOrderRoundError",
    "PhaseError",
    "BudgetUnsatisfiableError",
    "ReplayError",
]
