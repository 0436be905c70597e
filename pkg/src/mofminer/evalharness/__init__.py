from .embed import (
    SIMILARITY_THRESHOLD,
    HashingEmbedder,
    cosine_similarity,
    mean_pool_embedding,
    sentence_similarity,
)
from .metrics import Judgment, MetricReport, compute_metrics
from .preprocess import preprocess_synthesis_text
from .rules import RuleVerdict, cells_equivalent
from .runner import GoldRecord, evaluate_directory, load_gold

__all__ = [
    "GoldRecord",
    "HashingEmbedder",
    "Judgment",
    "MetricReport",
    "RuleVerdict",
    "SIMILARITY_THRESHOLD",
    "cells_equivalent",
    "compute_metrics",
    "cosine_similarity",
    "evaluate_directory",
    "load_gold",
    "mean_pool_embedding",
    "preprocess_synthesis_text",
    "sentence_similarity",
]
