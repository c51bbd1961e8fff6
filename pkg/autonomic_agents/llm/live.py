"""Live backend speaking the OpenAI-compatible chat-completions protocol over httpx."""

import logging
import os
import time
from typing import Any, Callable, Dict, Optional

import httpx

from .base import ChatRequest, ChatResponse, LLMBackend
from .tokens import estimate_tokens
from ..utils.exceptions import (
    AuthError,
    BackendUnavailableError,
    MalformedProviderResponseError,
    RateLimitedError,
)

ENV_API_BASE = "LLM_API_BASE"
ENV_API_KEY = "LLM_API_KEY"
DEFAULT_API_BASE = "https://api.openai.com"

TRANSIENT_STATUS = {429, 500, 502, 503, 504}
AUTH_STATUS = {401, 403}


def resolve_credentials(
    api_key: Optional[str] = None, api_base: Optional[str] = None
) -> Dict[str, str]:
    """Per-agent values win over ``LLM_API_KEY`` / ``LLM_API_BASE``.

    Raises:
        AuthError: no key is available.
    """
    key = (api_key or os.getenv(ENV_API_KEY, "")).strip()
    base = (api_base or os.getenv(ENV_API_BASE, "") or DEFAULT_API_BASE).strip()
    if not key:
        raise AuthError(f"Missing API key: set {ENV_API_KEY} or an agent api_key", "live")
    return {"api_key": key, "api_base": base.rstrip("/")}


class LiveChatBackend(LLMBackend):
    """One chat-completion POST per call, with bounded retries on transient failures.

    The first attempt is followed by up to ``max_retries`` retries, waiting
    ``retry_delay * 2**n`` seconds before retry n (1 s, 2 s, 4 s by default).
    401/403 are never retried.
    """

    def __init__(
        self,
        api_key: str,
        api_base: str = DEFAULT_API_BASE,
        timeout: float = 60.0,
        max_retries: int = 3,
        retry_delay: float = 1.0,
        transport: Optional[httpx.BaseTransport] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if not api_key:
            raise AuthError("Missing API key", "live")
        self.api_base = api_base.rstrip("/")
        self.max_retries = max_retries
        self.retry_delay = retry_delay
        self.backend_id = f"live:{self.api_base}"
        self._sleep = sleep
        self._client = httpx.Client(
            timeout=timeout,
            transport=transport,
            headers={
                "Authorization": f"Bearer {api_key}",
                "Content-Type": "application/json",
            },
        )
        self.logger = logging.getLogger(__name__)

    @property
    def url(self) -> str:
        return f"{self.api_base}/v1/chat/completions"

    def complete(self, request: ChatRequest) -> ChatResponse:
        attempts = 0
        last_error = ""
        rate_limited = False
        while True:
            attempts += 1
            try:
                response = self._client.post(self.url, json=request.to_wire())
            except httpx.TransportError as e:
                last_error = f"{type(e).__name__}: {e}"
                rate_limited = False
            else:
                if response.status_code in AUTH_STATUS:
                    raise AuthError(
                        f"Credentials rejected (HTTP {response.status_code})", self.backend_id
                    )
                if response.status_code not in TRANSIENT_STATUS:
                    if response.is_error:
                        raise MalformedProviderResponseError(
                            f"Unexpected HTTP {response.status_code}: {response.text[:200]}",
                            self.backend_id,
                        )
                    return self._parse(response, request)
                last_error = f"HTTP {response.status_code}"
                rate_limited = response.status_code == 429

            if attempts > self.max_retries:
                break
            delay = self.retry_delay * (2 ** (attempts - 1))
            self.logger.warning(
                f"Attempt {attempts}/{self.max_retries + 1} failed ({last_error}); "
                f"retrying in {delay:.1f}s"
            )
            self._sleep(delay)

        if rate_limited:
            raise RateLimitedError(attempts, self.backend_id)
        raise BackendUnavailableError(attempts, last_error, self.backend_id)

    def _parse(self, response: httpx.Response, request: ChatRequest) -> ChatResponse:
        try:
            payload: Dict[str, Any] = response.json()
            content = payload["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise MalformedProviderResponseError(
                f"Malformed chat-completions payload: {e}", self.backend_id
            ) from e
        if content is None:
            content = ""
        if not isinstance(content, str):
            raise MalformedProviderResponseError("Message content is not text", self.backend_id)

        usage = payload.get("usage") or {}
        prompt_tokens = usage.get("prompt_tokens")
        completion_tokens = usage.get("completion_tokens")
        if not isinstance(prompt_tokens, int):
            prompt_tokens = sum(estimate_tokens(m.content) for m in request.messages)
        if not isinstance(completion_tokens, int):
            completion_tokens = estimate_tokens(content)
        return ChatResponse(
            content=content,
            prompt_tokens=prompt_tokens,
            completion_tokens=completion_tokens,
            backend_id=self.backend_id,
        )

    def close(self) -> None:
        self._client.close()
