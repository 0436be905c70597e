"""Ligand abbreviation resolution (HxLx / LxHx / Lx families).

A data-driven registry of definitional patterns proposes candidate
mappings; a triple filter (grammar, no-metal, co-occurrence) prunes
them; ambiguous abbreviations can optionally be adjudicated by the
gateway, which may only ever pick among the regex candidates.
"""

from __future__ import annotations

import json
import logging
import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .chem import contains_metal
from .errors import FixtureMissing, ProviderUnavailable, SchemaViolation

log = logging.getLogger(__name__)

_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")

GRAMMAR_RE = re.compile(r"^(H\d*L\d*|L\d*H\d*|L\d*)$")

_ABBR_SRC = (
    r"(?<![A-Za-z0-9])"
    r"(H[0-9₀-₉]*L[0-9₀-₉]*"
    r"|L[0-9₀-₉]*H[0-9₀-₉]*"
    r"|L[0-9₀-₉]*)"
    r"(?![A-Za-z0-9])"
)

_NAME_CHARS = r"A-Za-z0-9,'’′\-·⋅\[\]"
_TOKEN_SRC = rf"[A-Za-z0-9][{_NAME_CHARS}]*(?:\([^()\s]{{1,14}}\)[{_NAME_CHARS}]*)?"
_NAME_SRC = rf"({_TOKEN_SRC}(?:[ ]{_TOKEN_SRC}){{0,7}})"

# Words that never appear inside a chemical name; used to trim over-greedy
# name captures at the edge away from the defining anchor. Nouns like
# "acid" or "anhydride" are legitimate name parts and must stay out.
_STOPWORDS = {
    "a", "additionally", "afforded", "affording", "also", "an", "and", "are",
    "as", "by", "commercial", "compound", "contains", "finally", "first",
    "for", "framework", "from", "gave", "here", "in", "initially", "is",
    "its", "later", "ligand", "linker", "meanwhile", "moreover", "namely",
    "next", "obtained", "of", "or", "precursor", "prepared", "purchased",
    "reagent", "received", "respectively", "similarly", "solid",
    "subsequently", "synthesized", "the", "then", "thereafter", "this",
    "throughout", "to", "type", "typically", "unless", "until", "used",
    "uses", "using", "via", "was", "we", "were", "where", "which", "while",
    "with", "within", "without",
}


@dataclass
class AbbreviationMapping:
    abbreviation: str
    full_name: str
    pattern_id: int
    evidence_span: tuple[int, int]
    confirmed: bool = False


@dataclass(frozen=True)
class _Pattern:
    id: int
    slug: str
    regex: re.Pattern
    name_side: str  # which side of the anchor the name sits on


def flatten_abbreviation(abbr: str) -> str:
    return unicodedata.normalize("NFKC", abbr).translate(_SUBSCRIPTS)


def load_patterns(extra_path: str | Path | None = None) -> list[_Pattern]:
    raw = json.loads(
        resources.files("mofminer.data").joinpath("abbrev_patterns.json").read_text()
    )
    if extra_path is not None:
        raw.extend(json.loads(Path(extra_path).read_text()))
    patterns = []
    for row in raw:
        template = row["template"]
        name_side = "left" if template.index("{NAME}") < template.index("{ABBR}") else "right"
        source = template.replace("{ABBR}", _ABBR_SRC).replace("{NAME}", _NAME_SRC)
        patterns.append(
            _Pattern(
                id=int(row["id"]),
                slug=row["slug"],
                regex=re.compile(source),
                name_side=name_side,
            )
        )
    return patterns


_PATTERNS = load_patterns()


def _trim_name(raw_name: str, name_side: str) -> str:
    tokens = raw_name.split(" ")
    if name_side == "left":
        # Keep what follows the last stopword (closest to the anchor).
        for i in range(len(tokens) - 1, -1, -1):
            if tokens[i].lower() in _STOPWORDS:
                tokens = tokens[i + 1 :]
                break
    else:
        for i, token in enumerate(tokens):
            if token.lower() in _STOPWORDS:
                tokens = tokens[:i]
                break
    return " ".join(tokens).strip(" ,;")


_SENTENCE_RE = re.compile(r"(?<=[.!?;])\s+|\n+")


def _sentences(text: str):
    start = 0
    for m in _SENTENCE_RE.finditer(text):
        if m.start() > start:
            yield start, text[start : m.start()]
        start = m.end()
    if start < len(text):
        yield start, text[start:]


def scan_mappings(
    text: str, patterns: list[_Pattern] | None = None
) -> list[AbbreviationMapping]:
    """Apply the definitional patterns sentence by sentence.

    Duplicate (abbreviation, name) pairs keep only their earliest span.
    """
    patterns = patterns if patterns is not None else _PATTERNS
    seen: dict[tuple[str, str], AbbreviationMapping] = {}
    results: list[AbbreviationMapping] = []
    for offset, sentence in _sentences(text):
        for pattern in patterns:
            for m in pattern.regex.finditer(sentence):
                groups = m.groups()
                if pattern.name_side == "left":
                    raw_name, abbr = groups[0], groups[1]
                else:
                    abbr, raw_name = groups[0], groups[1]
                name = _trim_name(raw_name, pattern.name_side)
                if not name:
                    continue
                key = (flatten_abbreviation(abbr), name.lower())
                if key in seen:
                    continue
                mapping = AbbreviationMapping(
                    abbreviation=abbr,
                    full_name=name,
                    pattern_id=pattern.id,
                    evidence_span=(offset + m.start(), offset + m.end()),
                )
                seen[key] = mapping
                results.append(mapping)
    results.sort(key=lambda m: m.evidence_span)
    return results


def triple_filter(
    candidates: list[AbbreviationMapping], text: str | None = None
) -> list[AbbreviationMapping]:
    """Grammar compliance, no-metal full names, and co-occurrence of the
    pair inside the evidence window."""
    kept = []
    for cand in candidates:
        if not GRAMMAR_RE.match(flatten_abbreviation(cand.abbreviation)):
            continue
        if contains_metal(cand.full_name):
            continue
        if text is not None:
            window = text[cand.evidence_span[0] : cand.evidence_span[1]]
            if cand.abbreviation not in window or cand.full_name not in window:
                continue
        kept.append(cand)
    return kept


def resolve(
    text: str,
    gateway=None,
    mode: str = "regex_only",
    patterns: list[_Pattern] | None = None,
    doc_id: str = "",
) -> list[AbbreviationMapping]:
    """Produce confirmed mappings for unambiguous abbreviations.

    Ambiguous abbreviations (several distinct definitions) stay
    unconfirmed in regex_only mode; in regex_plus_llm mode the gateway
    picks among the regex candidates, and a contradicting reply leaves
    the abbreviation unresolved rather than inventing a name. Gateway
    failures degrade to the regex_only result with a logged warning.
    """
    candidates = triple_filter(scan_mappings(text, patterns), text)
    groups: dict[str, list[AbbreviationMapping]] = {}
    for cand in candidates:
        groups.setdefault(flatten_abbreviation(cand.abbreviation), []).append(cand)

    resolved: list[AbbreviationMapping] = []
    for abbr_key, group in groups.items():
        distinct = {c.full_name.lower() for c in group}
        if len(distinct) == 1:
            group[0].confirmed = True
            resolved.append(group[0])
            continue
        if mode == "regex_plus_llm" and gateway is not None:
            choice = _adjudicate(abbr_key, group, text, gateway, doc_id)
            if choice is not None:
                choice.confirmed = True
                resolved.append(choice)
                continue
        resolved.extend(group)  # unresolved: all candidates kept, unconfirmed
    resolved.sort(key=lambda m: m.evidence_span)
    return resolved


def adjudication_payload(abbr_key: str, group: list[AbbreviationMapping], text: str) -> str:
    context = " | ".join(
        text[max(0, c.evidence_span[0] - 60) : c.evidence_span[1] + 60] for c in group
    )
    return (
        f"Abbreviation: {abbr_key}\nCandidates:\n"
        + "\n".join(f"{i + 1}. {c.full_name}" for i, c in enumerate(group))
        + f"\nContext: {context}"
    )


def _adjudicate(abbr_key, group, text, gateway, doc_id) -> AbbreviationMapping | None:
    payload = adjudication_payload(abbr_key, group, text)
    try:
        response = gateway.complete_json(
            "abbrev_adjudicate", payload, doc_id=doc_id, node="abbrev-resolve"
        )
    except (SchemaViolation, FixtureMissing, ProviderUnavailable) as exc:
        log.warning("abbreviation adjudication degraded to regex-only: %s", exc)
        return None
    picked = response.parsed_json.get("full_name")
    if not picked:
        return None
    for cand in group:
        if cand.full_name.lower() == str(picked).lower():
            return cand
    return None


def mapping_to_json(mapping: AbbreviationMapping) -> dict:
    return {
        "abbreviation": mapping.abbreviation,
        "full_name": mapping.full_name,
        "pattern_id": mapping.pattern_id,
        "evidence_span": list(mapping.evidence_span),
        "confirmed": mapping.confirmed,
    }
