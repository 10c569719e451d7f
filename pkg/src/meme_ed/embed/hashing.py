"""Deterministic feature-hashing text embedder.

A seeded stand-in for a pretrained encoder: unigram and bigram features are
sign-hashed into d buckets and the count vector is L2-normalized. Keyed
BLAKE2b keeps the mapping stable across platforms and Python versions.

Adjacent identical tokens contribute no bigram feature: a self-pair carries
no order information, and dropping it keeps repeated-token texts exactly
parallel to their unigram direction.
"""

from __future__ import annotations

from functools import lru_cache
from hashlib import blake2b

import numpy as np

from ..errors import DataError
from .tokenize import tokenize_approx

_MASK64 = (1 << 64) - 1


@lru_cache(maxsize=1 << 16)
def _bucket(feature: bytes, d: int, seed: int) -> tuple[int, float]:
    key = (seed & _MASK64).to_bytes(8, "little")
    h = int.from_bytes(blake2b(feature, digest_size=8, key=key).digest(), "little")
    return (h >> 1) % d, 1.0 if h & 1 else -1.0


def hash_embed(text: str, d: int = 256, seed: int = 0) -> np.ndarray:
    """Embed text as a unit-norm float64 vector of dimension d.

    Empty (or all-whitespace) text embeds to the zero vector; that path is
    only reachable if the filler-sentence policy is disabled upstream.
    """
    if d < 8:
        raise DataError(f"embedding dimension must be >= 8, got {d}")
    vec = np.zeros(d, dtype=np.float64)
    tokens = tokenize_approx(text)
    for tok in tokens:
        idx, sign = _bucket(b"u\x1f" + tok.encode("utf-8"), d, seed)
        vec[idx] += sign
    for left, right in zip(tokens, tokens[1:]):
        if left == right:
            continue
        feature = b"b\x1f" + left.encode("utf-8") + b"\x1f" + right.encode("utf-8")
        idx, sign = _bucket(feature, d, seed)
        vec[idx] += sign
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


class HashEmbedder:
    """Callable wrapper binding (d, seed) for pipeline use."""

    source = "hash"

    def __init__(self, d: int = 256, seed: int = 0):
        if d < 8:
            raise DataError(f"embedding dimension must be >= 8, got {d}")
        self.d = d
        self.seed = seed

    def __call__(self, text: str) -> np.ndarray:
        return hash_embed(text, self.d, self.seed)
