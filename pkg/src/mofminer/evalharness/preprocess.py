"""Chemistry-aware text preprocessing applied before similarity scoring.

Mirrors the pipeline's characterization stripping and adds the
normalizations that only matter for comparison: synthesis titles,
temperature spellings, and duration spellings.
"""

from __future__ import annotations

import re

from ..extract import strip_characterization

_TITLE_RE = re.compile(r"^\s*Synthesis of[^:\n]{0,120}:\s*", re.IGNORECASE)
_TEMP_RE = re.compile(r"(\d+(?:\.\d+)?)\s*(?:°\s*C|℃|º\s*C|o\s*C)\b")
_HOURS_RE = re.compile(r"(\d+(?:\.\d+)?)\s*(?:hours|hrs|hr|h)\b", re.IGNORECASE)


def preprocess_synthesis_text(text: str) -> str:
    """Normalize a synthesis description for evaluation; idempotent."""
    out = _TITLE_RE.sub("", text)
    out = strip_characterization(out)
    out = _TEMP_RE.sub(r"\1 C", out)
    out = _HOURS_RE.sub(r"\1h", out)
    out = re.sub(r"[ \t]{2,}", " ", out)
    return out.strip()
