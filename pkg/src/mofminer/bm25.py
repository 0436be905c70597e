"""Okapi BM25 over tokenized documents.

Tokenization keeps digits inside words so chemical tokens like "H2L"
survive as single terms.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass
class Bm25Index:
    documents: list[list[str]]
    k1: float = 1.2
    b: float = 0.75
    df: Counter = field(default_factory=Counter)
    avgdl: float = 0.0
    _term_freqs: list[Counter] = field(default_factory=list)

    def __post_init__(self):
        self._term_freqs = [Counter(doc) for doc in self.documents]
        self.df = Counter()
        for tf in self._term_freqs:
            for term in tf:
                self.df[term] += 1
        if self.documents:
            self.avgdl = sum(len(d) for d in self.documents) / len(self.documents)


def build_index(texts: list[str], k1: float = 1.2, b: float = 0.75) -> Bm25Index:
    return Bm25Index([tokenize(t) for t in texts], k1=k1, b=b)


def bm25_score(index: Bm25Index, query: list[str], doc_index: int) -> float:
    """Okapi BM25 score of one document against a token query."""
    if not 0 <= doc_index < len(index.documents):
        raise IndexError(f"doc_index {doc_index} out of range")
    tf = index._term_freqs[doc_index]
    dl = len(index.documents[doc_index])
    n_docs = len(index.documents)
    norm = index.k1 * (1.0 - index.b + index.b * dl / index.avgdl) if index.avgdl else 0.0
    score = 0.0
    for term in query:
        f = tf.get(term, 0)
        if f == 0:
            continue
        idf = math.log((n_docs - index.df[term] + 0.5) / (index.df[term] + 0.5) + 1.0)
        score += idf * f * (index.k1 + 1.0) / (f + norm)
    return score


def rank(index: Bm25Index, query: list[str]) -> list[tuple[int, float]]:
    """Document indices with scores, best first; ties keep list order."""
    scored = [(i, bm25_score(index, query, i)) for i in range(len(index.documents))]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored
