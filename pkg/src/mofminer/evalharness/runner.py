"""Evaluation runner: compares pipeline outputs against a gold set.

Gold records live in a JSON-lines file; predictions are the pipeline's
structure_<CCDC>.md and identifier_<CCDC>.txt files found anywhere
under the prediction directory.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from ..assemble import STRUCTURED_FIELDS, StructuredRecord, parse_markdown
from .embed import HashingEmbedder, sentence_similarity
from .metrics import Judgment, compute_metrics
from .preprocess import preprocess_synthesis_text
from .rules import cells_equivalent


@dataclass
class GoldRecord:
    ccdc_code: str
    synthesis_text: str
    structured: StructuredRecord


def load_gold(path: str | Path) -> list[GoldRecord]:
    records = []
    seen: set[str] = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        code = row["ccdc_code"].upper()
        if code in seen:
            raise ValueError(f"duplicate gold ccdc_code {code}")
        seen.add(code)
        structured = StructuredRecord()
        for key, _ in STRUCTURED_FIELDS:
            structured.set(key, row.get("structured", {}).get(key))
        records.append(
            GoldRecord(
                ccdc_code=code,
                synthesis_text=row.get("synthesis_text", ""),
                structured=structured,
            )
        )
    return records


def _find_file(pred_dir: Path, name: str) -> Path | None:
    direct = pred_dir / name
    if direct.is_file():
        return direct
    hits = sorted(pred_dir.rglob(name))
    return hits[0] if hits else None


def _identifier_body(path: Path) -> str:
    lines = path.read_text(encoding="utf-8").splitlines()
    return "\n".join(lines[1:]).strip()


def evaluate_directory(
    gold_path: str | Path,
    pred_dir: str | Path,
    embedder=None,
    chemical_embedder=None,
) -> dict:
    """Produce the full evaluation report for a prediction directory."""
    pred_dir = Path(pred_dir)
    gold = load_gold(gold_path)
    embedder = embedder or HashingEmbedder()

    judgments: list[Judgment] = []
    sentences = []
    for record in gold:
        md_path = _find_file(pred_dir, f"structure_{record.ccdc_code}.md")
        predicted = parse_markdown(md_path.read_text(encoding="utf-8")) if md_path else StructuredRecord()
        for key, _ in STRUCTURED_FIELDS:
            gold_value = record.structured.get(key)
            pred_value = predicted.get(key)
            equivalent = None
            if gold_value and pred_value:
                verdict, _sim = cells_equivalent(
                    gold_value,
                    pred_value,
                    field=key,
                    embedder=embedder,
                    chemical_embedder=chemical_embedder,
                )
                equivalent = bool(verdict.equivalent)
            judgments.append(
                Judgment(
                    gold_present=bool(gold_value),
                    predicted_present=bool(pred_value),
                    equivalent=equivalent,
                    field=key,
                )
            )
        txt_path = _find_file(pred_dir, f"identifier_{record.ccdc_code}.txt")
        if txt_path and record.synthesis_text:
            gold_text = preprocess_synthesis_text(record.synthesis_text)
            pred_text = preprocess_synthesis_text(_identifier_body(txt_path))
            similarity = sentence_similarity(gold_text, pred_text, embedder)
            sentences.append(
                {
                    "ccdc_code": record.ccdc_code,
                    "similarity": similarity,
                    "exact": gold_text == pred_text,
                }
            )

    report = compute_metrics(judgments)
    sentences.sort(key=lambda s: -s["similarity"])
    summary = {
        "cells": report.to_json(),
        "sentences": sentences,
        "sentence_mean_similarity": (
            sum(s["similarity"] for s in sentences) / len(sentences) if sentences else None
        ),
        "gold_records": len(gold),
    }
    return summary


def write_reports(summary: dict, json_path: str | Path, csv_path: str | Path | None = None):
    Path(json_path).write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                ["field", "tp", "fp", "fn", "tn", "accuracy", "precision", "recall", "f1"]
            )
            for name, row in summary["cells"]["per_field"].items():
                writer.writerow(
                    [
                        name,
                        row["tp"],
                        row["fp"],
                        row["fn"],
                        row["tn"],
                        f"{row['accuracy']:.4f}",
                        f"{row['precision']:.4f}",
                        f"{row['recall']:.4f}",
                        f"{row['f1']:.4f}",
                    ]
                )
