"""Approximate tokenizer and token-budget truncation.

This deliberately simple tokenizer (lowercase, whitespace splits, every
punctuation mark its own token) stands in for a subword vocabulary: what
matters architecturally is the budget semantics, not exact boundaries.
Imported encoder embeddings bypass it entirely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import DataError

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)

DEFAULT_TOKEN_LIMIT = 512


@dataclass(frozen=True)
class TokenBudget:
    limit: int = DEFAULT_TOKEN_LIMIT

    def __post_init__(self) -> None:
        if self.limit < 1:
            raise DataError(f"token budget must be >= 1, got {self.limit}")


def tokenize_approx(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def truncate(text: str, budget: TokenBudget) -> str:
    """Return text unchanged if within budget, else rebuild from the first
    `limit` tokens joined by single spaces."""
    tokens = tokenize_approx(text)
    if len(tokens) <= budget.limit:
        return text
    return " ".join(tokens[: budget.limit])
