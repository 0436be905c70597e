"""Stage-1 extraction: synthesis paragraphs and crystal-data tables.

Both operations talk to the gateway; everything around the model call
(characterization stripping, header synonym mapping, unit conversion,
completeness filtering) is deterministic and tested without a model.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .ingest import DocumentRecord

CRYSTAL_SYSTEMS = {
    "triclinic",
    "monoclinic",
    "orthorhombic",
    "tetragonal",
    "trigonal",
    "hexagonal",
    "cubic",
}

# The completeness rule counts these eight fields; name/formula/weight/color
# are descriptive and never gate an entry.
KEY_PARAMETERS = (
    "crystal_system",
    "space_group",
    "a",
    "b",
    "c",
    "alpha",
    "beta",
    "gamma",
)


@dataclass
class SynthesisParagraph:
    compound_hint: str
    text: str
    source_span: tuple[int, int] | None = None


@dataclass
class CrystalTableEntry:
    compound_name: str
    empirical_formula: str | None = None
    molecular_weight: float | None = None
    crystal_system: str | None = None
    space_group: str | None = None
    a: float | None = None
    b: float | None = None
    c: float | None = None
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    color: str | None = None

    def missing_key_parameters(self) -> int:
        return sum(1 for k in KEY_PARAMETERS if getattr(self, k) is None)


# --- characterization stripping ------------------------------------------

# Continue to the end of the sentence, treating a period followed by a digit
# as a decimal point rather than a terminator ("C, 55.2; H, 4.1.").
_TAIL = r"(?:[^.\n]|\.(?=\d))*\.?"
_SUP = "[0-9¹²³⁰⁴-⁹]"

_CHARACTERIZATION_RES = [
    re.compile(rf"Anal\.?\s*[Cc]alcd{_TAIL}"),
    re.compile(rf"\bFT-?IR\b{_TAIL}"),
    re.compile(rf"\bIR\s*\({_TAIL}"),
    re.compile(rf"\b{_SUP}{{1,3}}\s*[HCFPN]\s*NMR\b{_TAIL}"),
    re.compile(rf"\bNMR\s*\({_TAIL}"),
    re.compile(
        rf"(?:(?:Found|Calcd|Calc)\.?\s*:?\s*)?"
        rf"C,?\s+\d+\.\d+\s*;\s*H,?\s+\d+\.\d+(?:\s*;\s*[A-Z][a-z]?,?\s+\d+\.\d+)*{_TAIL}"
    ),
]


def strip_characterization(text: str) -> str:
    """Remove post-synthesis characterization fragments (elemental
    analysis, IR/FT-IR, NMR, percentage runs). Deterministic and
    idempotent; spans are removed in place, surrounding text untouched."""
    spans: list[tuple[int, int]] = []
    for pattern in _CHARACTERIZATION_RES:
        for m in pattern.finditer(text):
            spans.append(m.span())
    if not spans:
        return text
    spans.sort()
    merged = [list(spans[0])]
    for start, end in spans[1:]:
        if start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    pieces = []
    cursor = 0
    for start, end in merged:
        pieces.append(text[cursor:start])
        cursor = end
    pieces.append(text[cursor:])
    out = "".join(pieces)
    out = re.sub(r"[ \t]{2,}", " ", out)
    out = re.sub(r" +([.,;)])", r"\1", out)
    out = re.sub(r" +\n", "\n", out)
    return out.strip()


# --- synthesis paragraphs -------------------------------------------------


def parse_synthesis(doc: DocumentRecord, gateway) -> list[SynthesisParagraph]:
    """Extract self-contained synthesis paragraphs via the gateway.

    The model is asked to resolve bridging references and drop
    characterization data; stripping is applied again here as a
    post-filter in case the reply retains any.
    """
    response = gateway.complete_json(
        "synthesis_parse", doc.cleaned_text, doc_id=doc.doc_id, node="synthesis-parse"
    )
    paragraphs = []
    for item in response.parsed_json["paragraphs"]:
        text = strip_characterization(item["text"]).strip()
        if not text:
            continue
        # A span is recorded only when the paragraph survives verbatim in
        # the source; bridging-resolved paragraphs have no single span.
        span = None
        pos = doc.cleaned_text.find(text)
        if pos >= 0:
            span = (pos, pos + len(text))
        paragraphs.append(
            SynthesisParagraph(
                compound_hint=str(item["compound_hint"]).strip(), text=text, source_span=span
            )
        )
    return paragraphs


# --- crystal tables ---------------------------------------------------------


def _load_synonyms(extra_path: str | Path | None = None) -> dict[str, str]:
    base = json.loads(
        resources.files("mofminer.data").joinpath("table_synonyms.json").read_text()
    )
    if extra_path is not None:
        base.update(json.loads(Path(extra_path).read_text()))
    return base


_SYNONYMS = _load_synonyms()

_GREEK = {"α": "alpha", "β": "beta", "γ": "gamma", "å": "å"}


def _normalize_header(header: str) -> str:
    text = header.strip().lower()
    for greek, name in _GREEK.items():
        text = text.replace(greek, name)
    text = re.sub(r"[()\[\]/°,]", " ", text)
    text = re.sub(r"\bdeg(?:rees)?\b", "", text)
    text = re.sub(r"\s+", " ", text).strip()
    return text


def _parse_numeric(value) -> float | None:
    if value is None:
        return None
    if isinstance(value, (int, float)):
        return float(value)
    text = re.sub(r"\(\d+\)", "", str(value)).strip()
    try:
        return float(text)
    except ValueError:
        return None


def map_table_row(row: dict, synonyms: dict[str, str] | None = None) -> CrystalTableEntry:
    """Map one model-reported table row through the synonym dictionary
    into a normalized entry, converting pm/nm lengths to Å."""
    synonyms = synonyms if synonyms is not None else _SYNONYMS
    fields: dict[str, object] = {}
    for header, value in row.items():
        target = synonyms.get(_normalize_header(header))
        if target is None:
            continue
        target, _, unit = target.partition(":")
        if target in ("a", "b", "c"):
            num = _parse_numeric(value)
            if num is None:
                continue
            if unit == "pm":
                num /= 100.0
            elif unit == "nm":
                num *= 10.0
            if num > 0:
                fields[target] = num
        elif target in ("alpha", "beta", "gamma"):
            num = _parse_numeric(value)
            if num is not None and 0 < num < 180:
                fields[target] = num
        elif target == "molecular_weight":
            num = _parse_numeric(value)
            if num is not None and num > 0:
                fields[target] = num
        elif target == "crystal_system":
            system = str(value).strip().lower() if value is not None else ""
            if system == "rhombohedral":
                system = "trigonal"
            if system in CRYSTAL_SYSTEMS:
                fields[target] = system
        elif value is not None and str(value).strip():
            fields[target] = str(value).strip()
    return CrystalTableEntry(compound_name=str(fields.pop("compound_name", "")), **fields)


def dual_threshold_filter(entries: list[CrystalTableEntry]) -> list[CrystalTableEntry]:
    """Keep entries missing at most one of the eight key parameters."""
    return [e for e in entries if e.missing_key_parameters() <= 1]


def parse_tables(
    doc: DocumentRecord, gateway, synonyms: dict[str, str] | None = None
) -> list[CrystalTableEntry]:
    """Extract crystal-data entries via the gateway, then normalize and
    filter them."""
    response = gateway.complete_json(
        "table_parse", doc.cleaned_text, doc_id=doc.doc_id, node="table-parse"
    )
    entries = [map_table_row(row, synonyms) for row in response.parsed_json["entries"]]
    return dual_threshold_filter(entries)


def entry_to_json(entry: CrystalTableEntry) -> dict:
    return {
        "compound_name": entry.compound_name,
        "empirical_formula": entry.empirical_formula,
        "molecular_weight": entry.molecular_weight,
        "crystal_system": entry.crystal_system,
        "space_group": entry.space_group,
        "a": entry.a,
        "b": entry.b,
        "c": entry.c,
        "alpha": entry.alpha,
        "beta": entry.beta,
        "gamma": entry.gamma,
        "color": entry.color,
    }
