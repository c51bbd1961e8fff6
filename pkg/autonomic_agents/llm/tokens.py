"""Token estimation for prompt budgeting."""

import math
from typing import Callable

TokenEstimator = Callable[[str], int]

BYTES_PER_TOKEN = 4


def estimate_tokens(text: str) -> int:
    """Approximate token count: ceil(utf-8 byte length / 4)."""
    if not text:
        return 0
    return math.ceil(len(text.encode("utf-8")) / BYTES_PER_TOKEN)


def tiktoken_estimator(encoding: str = "cl100k_base") -> TokenEstimator:
    """Exact counter backed by tiktoken (install the ``tokenizer`` extra)."""
    import tiktoken

    encoder = tiktoken.get_encoding(encoding)

    def count(text: str) -> int:
        return len(encoder.encode(text)) if text else 0

    return count
