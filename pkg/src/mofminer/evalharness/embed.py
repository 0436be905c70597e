"""Embedding contract: cosine similarity, masked mean pooling, and the
deterministic offline embedder.

Transformer models plug in behind the same Embedder protocol; the
default hashing embedder keeps the suite hermetic.
"""

from __future__ import annotations

import hashlib
import re
from typing import Protocol

import numpy as np

from ..errors import EmbedderFailure, ZeroMask

SIMILARITY_THRESHOLD = 0.90

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Plain cosine: dot product over the product of L2 norms."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    norm = float(np.linalg.norm(a)) * float(np.linalg.norm(b))
    if norm == 0.0:
        return 0.0
    return float(np.dot(a, b) / norm)


def mean_pool_embedding(token_vectors, mask) -> np.ndarray:
    """Masked mean pool followed by L2 normalization.

    This is the contract every embedder plugin must satisfy for
    sentence vectors; padding positions carry mask 0.
    """
    vectors = np.asarray(token_vectors, dtype=float)
    weights = np.asarray(mask, dtype=float)
    if vectors.shape[0] != weights.shape[0]:
        raise ValueError("token_vectors and mask lengths differ")
    total = float(weights.sum())
    if total == 0.0:
        raise ZeroMask("mask sums to zero")
    pooled = (vectors * weights[:, None]).sum(axis=0) / total
    norm = float(np.linalg.norm(pooled))
    return pooled / norm if norm > 0.0 else pooled


class Embedder(Protocol):
    def embed(self, text: str) -> np.ndarray: ...


class HashingEmbedder:
    """Deterministic token-frequency embedder.

    Each token hashes to a fixed pseudo-random direction; a text embeds
    as the masked mean pool of its token vectors, matching the plugin
    contract exactly.
    """

    def __init__(self, dim: int = 256):
        self.dim = dim
        self._cache: dict[str, np.ndarray] = {}

    def _token_vector(self, token: str) -> np.ndarray:
        vec = self._cache.get(token)
        if vec is None:
            seed = int.from_bytes(
                hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest(), "big"
            )
            vec = np.random.default_rng(seed).standard_normal(self.dim)
            self._cache[token] = vec
        return vec

    def embed(self, text: str) -> np.ndarray:
        tokens = _TOKEN_RE.findall(text.lower())
        if not tokens:
            return np.zeros(self.dim)
        vectors = np.stack([self._token_vector(t) for t in tokens])
        return mean_pool_embedding(vectors, np.ones(len(tokens)))


def sentence_similarity(a: str, b: str, embedder: Embedder) -> float:
    """Identical strings short-circuit to 1.0 without embedding; other
    pairs score by cosine of their pooled vectors, clamped to [0, 1]."""
    if a == b:
        return 1.0
    try:
        va = embedder.embed(a)
        vb = embedder.embed(b)
    except Exception as exc:
        raise EmbedderFailure(f"embedder failed: {exc}") from exc
    return max(0.0, min(1.0, cosine_similarity(va, vb)))
