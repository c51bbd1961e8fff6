"""Deterministic backend replaying scripted replies, for tests and reproducible runs."""

import json
import logging
import threading
from collections import deque
from pathlib import Path
from typing import Any, Deque, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import yaml

from .base import ChatRequest, ChatResponse, LLMBackend
from .tokens import estimate_tokens
from ..utils.exceptions import ConfigParseError, ConfigValidationError

DEFAULT_REPLY = "NOOP"

ReplyTable = Dict[Tuple[str, int], List[str]]


class ScriptedPolicy:
    """Per-agent reply queues keyed by (agent, round).

    Each lookup consumes the next queued reply for that key; once a queue is exhausted
    the ``default_reply`` is returned. Script files map agent -> round -> reply, where a
    reply is a string or a list of strings (consumed in order)::

        {"default_reply": "NOOP",
         "replies": {"Agent1": {"0": "SET_PRICE 20.00", "4": "CONFIRM_SALE Agent4 18.00"}}}

    A bare ``{agent: {round: reply}}`` mapping is accepted too. A file may instead carry
    ``"variants": [replies, replies, ...]``; the run seed picks one of them.
    """

    def __init__(self, replies: Optional[ReplyTable] = None, default_reply: str = DEFAULT_REPLY):
        self.default_reply = default_reply
        self._queues: Dict[Tuple[str, int], Deque[str]] = {
            key: deque(values) for key, values in (replies or {}).items()
        }
        self._lock = threading.Lock()

    def next_reply(self, agent: str, round: int) -> str:
        with self._lock:
            queue = self._queues.get((agent, round))
            if queue:
                return queue.popleft()
        return self.default_reply

    def remaining(self) -> int:
        """Number of replies not yet consumed."""
        with self._lock:
            return sum(len(queue) for queue in self._queues.values())

    @classmethod
    def from_dict(
        cls,
        data: Mapping[str, Any],
        seed: int = 0,
        default_reply: str = DEFAULT_REPLY,
    ) -> "ScriptedPolicy":
        if not isinstance(data, Mapping):
            raise ConfigValidationError("Script must be a JSON or YAML object")
        default_reply = data.get("default_reply", default_reply)
        if "variants" in data:
            variants = data["variants"]
            if not isinstance(variants, list) or not variants:
                raise ConfigValidationError("Script 'variants' must be a non-empty list")
            choice = int(np.random.default_rng(seed).integers(len(variants)))
            logging.getLogger(__name__).info(
                f"Seed {seed} selected script variant {choice} of {len(variants)}"
            )
            table_data = variants[choice]
        elif "replies" in data:
            table_data = data["replies"]
        else:
            table_data = {k: v for k, v in data.items() if k != "default_reply"}
        return cls(_parse_table(table_data), default_reply=default_reply)

    @classmethod
    def load(
        cls, path: Union[str, Path], seed: int = 0, default_reply: str = DEFAULT_REPLY
    ) -> "ScriptedPolicy":
        path = Path(path)
        if not path.exists():
            raise ConfigParseError(str(path), "script file not found")
        try:
            with open(path, "r", encoding="utf-8") as f:
                if path.suffix.lower() in (".yaml", ".yml"):
                    data = yaml.safe_load(f)
                else:
                    data = json.load(f)
        except (OSError, UnicodeDecodeError, json.JSONDecodeError, yaml.YAMLError) as e:
            raise ConfigParseError(str(path), str(e)) from e
        return cls.from_dict(data, seed=seed, default_reply=default_reply)


def _parse_table(table_data: Any) -> ReplyTable:
    if not isinstance(table_data, Mapping):
        raise ConfigValidationError("Script replies must map agent -> round -> reply")
    errors = []
    table: ReplyTable = {}
    for agent, rounds in table_data.items():
        if not isinstance(rounds, Mapping):
            errors.append(f"{agent}: expected an object mapping round -> reply")
            continue
        for round_key, value in rounds.items():
            try:
                round_index = int(round_key)
            except (TypeError, ValueError):
                errors.append(f"{agent}.{round_key}: round must be an integer")
                continue
            if round_index < 0:
                errors.append(f"{agent}.{round_key}: round must be non-negative")
                continue
            if isinstance(value, str):
                replies = [value]
            elif isinstance(value, list) and all(isinstance(v, str) for v in value):
                replies = list(value)
            else:
                errors.append(f"{agent}.{round_key}: reply must be a string or list of strings")
                continue
            table[(str(agent), round_index)] = replies
    if errors:
        raise ConfigValidationError("Invalid script", errors)
    return table


class ScriptedBackend(LLMBackend):
    """Backend that answers from a :class:`ScriptedPolicy`. Usage is estimated."""

    backend_id = "scripted"

    def __init__(self, policy: ScriptedPolicy):
        self.policy = policy

    def complete(self, request: ChatRequest) -> ChatResponse:
        content = self.policy.next_reply(request.agent or "", request.round or 0)
        prompt_tokens = sum(estimate_tokens(m.content) for m in request.messages)
        return ChatResponse(
            content=content,
            prompt_tokens=prompt_tokens,
            completion_tokens=estimate_tokens(content),
            backend_id=self.backend_id,
        )
