"""Stage-3 fusion: paragraph-to-compound pairing, per-compound files,
and conversion of synthesis prose into the 13-field record.

Pairing ranks synthesis paragraphs with BM25 against a query built from
the compound's name, label and CCDC code; totals over multi-solvent
quantities are computed here deterministically instead of trusting
model arithmetic.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .abbrev import AbbreviationMapping
from .bm25 import build_index, rank, tokenize
from .crystal import CellParameters, canonicalize
from .errors import NoParagraphForCompound
from .extract import SynthesisParagraph

log = logging.getLogger(__name__)

STRUCTURED_FIELDS = (
    ("metal_source", "Metal Source"),
    ("organic_linkers_source", "Organic Linkers Source"),
    ("modulator_source", "Modulator Source"),
    ("solvent_source", "Solvent Source"),
    ("quantity_of_metal", "Quantity of Metal"),
    ("quantity_of_organic_linkers", "Quantity of Organic Linkers"),
    ("quantity_of_modulator", "Quantity of Modulator"),
    ("quantity_of_solvent", "Quantity of Solvent"),
    ("synthesis_temperature", "Synthesis Temperature"),
    ("synthesis_time", "Synthesis Time"),
    ("crystal_morphology", "Crystal Morphology"),
    ("yield", "Yield"),
    ("equipment", "Equipment"),
)


@dataclass
class StructuredRecord:
    metal_source: str | None = None
    organic_linkers_source: str | None = None
    modulator_source: str | None = None
    solvent_source: str | None = None
    quantity_of_metal: str | None = None
    quantity_of_organic_linkers: str | None = None
    quantity_of_modulator: str | None = None
    quantity_of_solvent: str | None = None
    synthesis_temperature: str | None = None
    synthesis_time: str | None = None
    crystal_morphology: str | None = None
    yield_: str | None = None
    equipment: str | None = None

    def get(self, key: str) -> str | None:
        return getattr(self, "yield_" if key == "yield" else key)

    def set(self, key: str, value: str | None) -> None:
        setattr(self, "yield_" if key == "yield" else key, value)

    def to_json(self) -> dict:
        return {key: self.get(key) for key, _ in STRUCTURED_FIELDS}


@dataclass
class CompoundDossier:
    ccdc_code: str
    compound_name: str
    synthesis_text: str
    crystal: CellParameters
    source_doc: str
    common_abbreviation: str | None = None
    abbreviation_glossary: list[AbbreviationMapping] | None = None


# --- paragraph pairing ------------------------------------------------------


def pair_paragraphs(
    compounds: list[dict],
    paragraphs: list[SynthesisParagraph],
    k1: float = 1.2,
    b: float = 0.75,
) -> dict[str, SynthesisParagraph]:
    """BM25-rank paragraphs for each compound query.

    compounds: [{"ccdc_code", "name", "label"}]. Ties break toward the
    earlier source span; a compound whose best score is zero raises
    NoParagraphForCompound at lookup time (handled by the caller).
    """
    pairing: dict[str, SynthesisParagraph] = {}
    if not paragraphs:
        return pairing
    index = build_index([p.text for p in paragraphs], k1=k1, b=b)

    def span_key(i: int):
        span = paragraphs[i].source_span
        return (span[0] if span else 10**9, i)

    for compound in compounds:
        query = tokenize(
            " ".join(
                str(compound.get(k, "") or "") for k in ("name", "label", "ccdc_code")
            )
        )
        scored = rank(index, query)
        best_score = scored[0][1] if scored else 0.0
        if best_score <= 0.0:
            continue
        tied = sorted(
            (i for i, s in scored if s == best_score),
            key=span_key,
        )
        pairing[compound["ccdc_code"]] = paragraphs[tied[0]]
    return pairing


def _label_token(text: str) -> str:
    cleaned = re.sub(r"\b(compound|complex|framework)\b", " ", text, flags=re.IGNORECASE)
    return cleaned.strip(" .,:;()[]{}").lower()


def join_by_label(
    paragraphs: list[SynthesisParagraph], label: str
) -> SynthesisParagraph | None:
    """Deterministic first-line pairing used by the post-processing
    split: a paragraph joins a compound when their labels agree."""
    wanted = _label_token(label)
    if not wanted:
        return None
    for paragraph in paragraphs:
        if _label_token(paragraph.compound_hint) == wanted:
            return paragraph
    return None


def best_matches(match_results) -> dict[str, object]:
    """Strongest match per candidate code: a lattice-level hit outranks a
    composition fallback (polymorph pairs share a formula), then higher
    degree wins; ties keep the earlier result."""
    best: dict[str, object] = {}
    for result in match_results:
        if not result.matched:
            continue
        current = best.get(result.candidate_id)
        if current is None or _match_rank(result) > _match_rank(current):
            best[result.candidate_id] = result
    return best


def _match_rank(result) -> tuple[int, float]:
    return (1 if result.level == "lattice" else 0, result.degree)


def generate_dossiers(
    state,
    gateway=None,
    *,
    records: dict[str, object] | None = None,
    k1: float = 1.2,
    b: float = 0.75,
) -> tuple[list[CompoundDossier], list[str]]:
    """Fuse match results, paragraphs and abbreviations per compound.

    Returns (dossiers, misses); misses are CCDC codes with no pairable
    paragraph. `records` optionally maps codes to dataset records that
    supply the authoritative chemical name and common abbreviation.
    """
    records = records or {}
    best_by_code = best_matches(state.match_results)

    entries_by_name = {e.compound_name: e for e in state.table_entries}
    compounds = []
    for code, result in best_by_code.items():
        record = records.get(code)
        compounds.append(
            {
                "ccdc_code": code,
                "label": result.query_id,
                "name": getattr(record, "chemical_name", "") if record else "",
            }
        )
    pairing = pair_paragraphs(compounds, state.synthesis_paragraphs, k1=k1, b=b)

    dossiers: list[CompoundDossier] = []
    misses: list[str] = []
    for compound in compounds:
        code = compound["ccdc_code"]
        paragraph = pairing.get(code)
        if paragraph is None:
            misses.append(code)
            continue
        record = records.get(code)
        entry = entries_by_name.get(best_by_code[code].query_id)
        crystal = canonicalize(entry) if entry is not None else CellParameters()
        glossary = [
            m
            for m in state.abbreviations
            if m.abbreviation in paragraph.text
        ]
        dossiers.append(
            CompoundDossier(
                ccdc_code=code,
                compound_name=(
                    getattr(record, "chemical_name", "") if record else ""
                )
                or f"compound {compound['label']}",
                common_abbreviation=getattr(record, "abbreviation", None) if record else None,
                synthesis_text=paragraph.text,
                crystal=crystal,
                abbreviation_glossary=glossary,
                source_doc=state.doc_id,
            )
        )
    dossiers.sort(key=lambda d: d.ccdc_code)
    return dossiers, misses


def render_dossier(dossier: CompoundDossier) -> str:
    """Per-compound block of the fused output file.

    Field order: name, CCDC code, common abbreviation, procedure,
    abbreviation glossary.
    """
    lines = [
        f"Compound: {dossier.compound_name}",
        f"CCDC code: {dossier.ccdc_code}",
        f"Common abbreviation: {dossier.common_abbreviation or 'n/a'}",
        f"Synthesis procedure: {dossier.synthesis_text}",
    ]
    glossary = dossier.abbreviation_glossary or []
    if glossary:
        confirmed = [m for m in glossary if m.confirmed]
        unresolved = [m for m in glossary if not m.confirmed]
        parts = [f"{m.abbreviation} = {m.full_name}" for m in confirmed]
        if unresolved:
            by_abbr: dict[str, list[str]] = {}
            for m in unresolved:
                by_abbr.setdefault(m.abbreviation, []).append(m.full_name)
            parts.extend(
                f"{abbr} unresolved (candidates: {'; '.join(names)})"
                for abbr, names in by_abbr.items()
            )
        lines.append("Abbreviations: " + "; ".join(parts))
    else:
        lines.append("Abbreviations: none")
    return "\n".join(lines)


# --- output splitting -------------------------------------------------------

_BLOCK_SEPARATOR = "\n\n\n"
_SPLIT_RE = re.compile(r"\n[ \t]*\n(?:[ \t]*\n)+")
_CCDC_RE = re.compile(r"\b([A-Z]{6}\d{0,2})\b")


def _rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z")


def split_outputs(merged: str, out_dir: str | Path) -> tuple[list[Path], dict]:
    """Split a merged document on double-blank-line boundaries into one
    identifier_<CCDC>.txt per block; the CCDC code comes from each
    block's first line. Blocks without a code are skipped and reported."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    blocks = [b.strip() for b in _SPLIT_RE.split(merged.strip()) if b.strip()]
    paths: list[Path] = []
    skipped: list[str] = []
    for block in blocks:
        first_line = block.splitlines()[0]
        m = _CCDC_RE.search(first_line)
        if m is None:
            skipped.append(first_line[:80])
            continue
        path = out_dir / f"identifier_{m.group(1)}.txt"
        path.write_text(block + "\n", encoding="utf-8")
        paths.append(path)
    report = {
        "timestamp": _rfc3339(),
        "total_files": len(paths),
        "files": [p.name for p in paths],
        "skipped": skipped,
    }
    return paths, report


def merge_blocks(blocks: list[str]) -> str:
    return _BLOCK_SEPARATOR.join(b.strip() for b in blocks)


# --- structured conversion --------------------------------------------------

_QTY_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([A-Za-zµ]+)\s*$")


def _merge_quantities(values: list[str]) -> str:
    """Join multiple quantities with '+', appending a computed total when
    every part carries the same unit."""
    joined = " + ".join(values)
    parsed = [_QTY_RE.match(v) for v in values]
    if len(values) > 1 and all(parsed):
        units = {m.group(2) for m in parsed}
        if len(units) == 1:
            total = sum(float(m.group(1)) for m in parsed)
            joined += f" (total {total:g} {units.pop()})"
    return joined


def _coerce_field(value) -> str | None:
    if value is None:
        return None
    if isinstance(value, list):
        values = [str(v).strip() for v in value if str(v).strip()]
        if not values:
            return None
        return _merge_quantities(values)
    text = str(value).strip()
    return text or None


def to_structured(dossier: CompoundDossier, gateway) -> tuple[StructuredRecord, str]:
    """Extract the 13-field record from the dossier's synthesis text and
    render its Markdown table."""
    response = gateway.complete_json(
        "structured_convert",
        dossier.synthesis_text,
        doc_id=dossier.source_doc,
        node="structured-convert",
    )
    record = StructuredRecord()
    for key, _ in STRUCTURED_FIELDS:
        record.set(key, _coerce_field(response.parsed_json.get(key)))
    if record.metal_source is None and record.organic_linkers_source is None:
        log.warning(
            "structured conversion for %s extracted neither a metal nor a linker",
            dossier.ccdc_code,
        )
    return record, render_markdown(dossier, record)


def render_markdown(dossier: CompoundDossier, record: StructuredRecord) -> str:
    lines = [
        f"# {dossier.ccdc_code}",
        "",
        "| Field | Value |",
        "| --- | --- |",
    ]
    for key, title in STRUCTURED_FIELDS:
        value = record.get(key)
        lines.append(f"| {title} | {value if value is not None else ''} |")
    return "\n".join(lines) + "\n"


def parse_markdown(text: str) -> StructuredRecord:
    """Read a structure_<CCDC>.md table back into a record (used by the
    evaluation runner)."""
    titles = {title: key for key, title in STRUCTURED_FIELDS}
    record = StructuredRecord()
    for line in text.splitlines():
        if not line.startswith("|"):
            continue
        cells = [c.strip() for c in line.strip("|").split("|")]
        if len(cells) != 2 or cells[0] not in titles:
            continue
        record.set(titles[cells[0]], cells[1] or None)
    return record


def write_report(report: dict, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return path
