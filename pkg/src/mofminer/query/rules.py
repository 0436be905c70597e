"""Deterministic rule-based query parser (the backup engine).

Keyword classification plus regex numeric extraction; produces the same
ParsedQuery shape as the LLM parser so the two engines are
interchangeable.
"""

from __future__ import annotations

import re

from ..dataset.store import PROPERTY_ALIASES, canonical_property, display_name
from .model import Operation, ParsedQuery, SHORT_KEYS

_GREETING_RE = re.compile(
    r"^\s*(hello|hi|hey|good (morning|afternoon|evening)|greetings)[!., ]*$", re.IGNORECASE
)
_RESET_RE = re.compile(r"\b(reset|clear (the )?(context|session)|start over)\b", re.IGNORECASE)
_PAGING_RE = re.compile(
    r"\b(?:show|give me|list|display)\s+(?:(\d+)\s+)?more\b|\bmore results\b|\bnext page\b",
    re.IGNORECASE,
)
_COMPARE_RE = re.compile(r"\b(compare|versus|vs\.?)\b", re.IGNORECASE)
_CONTEXT_RE = re.compile(r"\b(its|this material|that material|these|they|them|it)\b", re.IGNORECASE)

_OPERATIONS = [
    (re.compile(r"\b(average|mean)\b", re.IGNORECASE), "mean"),
    (re.compile(r"\b(maximum|max|highest|largest|biggest)\b", re.IGNORECASE), "max"),
    (re.compile(r"\b(minimum|min|lowest|smallest)\b", re.IGNORECASE), "min"),
    (re.compile(r"\b(count|how many|number of)\b", re.IGNORECASE), "count"),
]

_CCDC_RE = re.compile(r"\b([A-Z]{6}\d{0,2})\b")
_NAMED_RE = re.compile(r"\b([A-Z][A-Za-z]{1,9}-\d+[A-Za-z]*)\b")

_NUM = r"(\d+(?:\.\d+)?)"
_BETWEEN_RE = re.compile(
    rf"between\s+{_NUM}\s*(?:and|to|[-–—])\s*{_NUM}", re.IGNORECASE
)
_DASH_RANGE_RE = re.compile(rf"{_NUM}\s*[-–—]\s*{_NUM}")
_UPPER_RE = re.compile(
    rf"\b(?:under|below|less than|at most|smaller than|up to)\s+{_NUM}", re.IGNORECASE
)
_LOWER_RE = re.compile(
    rf"\b(?:over|above|greater than|at least|more than|exceeding)\s+{_NUM}", re.IGNORECASE
)

# Longest aliases first so "pore limiting diameter" beats "PLD"; single
# letters (cell axes) would match prose and are excluded from scanning.
_ALIAS_PATTERNS = [
    (re.compile(rf"\b{re.escape(alias)}\b", re.IGNORECASE), key)
    for alias, key in sorted(PROPERTY_ALIASES.items(), key=lambda kv: -len(kv[0]))
    if len(alias) > 1
]


def _number(text: str) -> float:
    value = float(text)
    return int(value) if value.is_integer() else value


def _find_properties(text: str) -> list[tuple[int, int, str]]:
    """(start, end, storage_key) of property mentions, earliest first,
    without overlapping shorter aliases inside longer ones."""
    hits: list[tuple[int, int, str]] = []
    taken: list[tuple[int, int]] = []
    for pattern, key in _ALIAS_PATTERNS:
        for m in pattern.finditer(text):
            if any(m.start() < e and m.end() > s for s, e in taken):
                continue
            taken.append((m.start(), m.end()))
            hits.append((m.start(), m.end(), key))
    hits.sort()
    return hits


def _find_materials(text: str, property_spans: list[tuple[int, int, str]]) -> list[str]:
    materials: list[str] = []
    spans = [(s, e) for s, e, _ in property_spans]

    def overlaps(m) -> bool:
        return any(m.start() < e and m.end() > s for s, e in spans)

    for m in _CCDC_RE.finditer(text):
        if not overlaps(m) and m.group(1) not in materials:
            materials.append(m.group(1))
    for m in _NAMED_RE.finditer(text):
        if not overlaps(m) and m.group(1) not in materials:
            materials.append(m.group(1))
    return materials


def _extract_ranges(text: str, props: list[tuple[int, int, str]]) -> dict:
    bounds: dict = {"min": {}, "max": {}}
    for i, (start, end, key) in enumerate(props):
        window_end = props[i + 1][0] if i + 1 < len(props) else len(text)
        window = text[end:window_end]
        short = SHORT_KEYS[key]
        m = _BETWEEN_RE.search(window) or _DASH_RANGE_RE.search(window)
        if m:
            lo, hi = _number(m.group(1)), _number(m.group(2))
            bounds["min"][short] = min(lo, hi)
            bounds["max"][short] = max(lo, hi)
            continue
        m = _UPPER_RE.search(window)
        if m:
            bounds["max"][short] = _number(m.group(1))
            continue
        m = _LOWER_RE.search(window)
        if m:
            bounds["min"][short] = _number(m.group(1))
    return bounds


def parse_rules(text: str) -> ParsedQuery:
    stripped = text.strip()
    if _RESET_RE.search(stripped):
        return ParsedQuery(query_type="reset", reasoning=["reset keyword"])
    if _GREETING_RE.match(stripped):
        return ParsedQuery(query_type="greeting", reasoning=["greeting"])
    paging = _PAGING_RE.search(stripped)
    if paging:
        size = int(paging.group(1)) if paging.group(1) else None
        return ParsedQuery(
            query_type="paging",
            uses_context=True,
            page_size=size,
            reasoning=["paging request over the previous result"],
        )

    props = _find_properties(stripped)
    properties = []
    for _, _, key in props:
        name = display_name(key)
        if name not in properties:
            properties.append(name)
    materials = _find_materials(stripped, props)
    uses_context = bool(_CONTEXT_RE.search(stripped)) and not materials

    operation = Operation()
    for pattern, op in _OPERATIONS:
        if pattern.search(stripped):
            operation = Operation(type=op)
            break

    bounds = _extract_ranges(stripped, props)
    has_bounds = bool(bounds["min"] or bounds["max"])

    if _COMPARE_RE.search(stripped) and len(materials) >= 2:
        return ParsedQuery(
            query_type="comparison",
            materials=materials,
            properties=properties,
            reasoning=[f"comparison of {len(materials)} materials"],
        )
    if operation.type != "none":
        return ParsedQuery(
            query_type="statistical",
            uses_context=uses_context,
            materials=materials,
            properties=properties,
            range=bounds,
            operation=operation,
            reasoning=[f"statistical operation {operation.type}"],
        )
    if has_bounds:
        return ParsedQuery(
            query_type="range",
            materials=materials,
            properties=properties,
            range=bounds,
            reasoning=["interval constraints detected"],
        )
    if properties and (materials or uses_context):
        return ParsedQuery(
            query_type="property",
            uses_context=uses_context,
            materials=materials,
            properties=properties,
            reasoning=["property lookup"],
        )
    return ParsedQuery(
        query_type="chat",
        uses_context=uses_context,
        materials=materials,
        properties=properties,
        reasoning=["no structured intent recognized"],
    )


def canonicalize_parsed(raw: dict) -> ParsedQuery:
    """Normalize a parser reply (LLM or rules JSON) into a ParsedQuery:
    property aliases to display names, range keys to short keys."""
    query_type = raw.get("query_type", "chat")
    if query_type not in (
        "property",
        "range",
        "comparison",
        "statistical",
        "paging",
        "reset",
        "greeting",
        "chat",
    ):
        query_type = "chat"
    properties = []
    for name in raw.get("properties") or []:
        try:
            display = display_name(canonical_property(str(name)))
        except Exception:
            continue
        if display not in properties:
            properties.append(display)
    bounds: dict = {"min": {}, "max": {}}
    raw_range = raw.get("range") or {}
    for side in ("min", "max"):
        for name, value in (raw_range.get(side) or {}).items():
            try:
                short = SHORT_KEYS[canonical_property(str(name))]
            except Exception:
                continue
            bounds[side][short] = _number(str(value))
    op_raw = raw.get("operation") or {}
    operation = Operation(
        type=op_raw.get("type", "none") if op_raw.get("type") in ("mean", "max", "min", "count", "none") else "none",
        value=op_raw.get("value"),
    )
    return ParsedQuery(
        query_type=query_type,
        uses_context=bool(raw.get("uses_context", False)),
        materials=[str(m) for m in raw.get("materials") or []],
        properties=properties,
        range=bounds,
        operation=operation,
        reasoning=[str(r) for r in raw.get("reasoning") or []],
        page_size=raw.get("page_size"),
        paged_index=raw.get("paged_index"),
    )
