"""Confusion counting and the derived metrics.

A judgment records whether the gold annotation exists, whether the
prediction exists, and (when both do) whether they were equivalent:
  TP: gold and prediction agree;
  FP: prediction exists but disagrees with gold or has none;
  FN: gold exists but the prediction is empty;
  TN: neither side annotated.
Zero denominators yield 0 by convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Judgment:
    gold_present: bool
    predicted_present: bool
    equivalent: bool | None = None
    field: str | None = None


@dataclass
class MetricReport:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0
    accuracy: float = 0.0
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    per_field: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "per_field": self.per_field,
        }


def _classify(j: Judgment) -> str:
    if j.predicted_present:
        if j.gold_present and j.equivalent:
            return "tp"
        return "fp"
    if j.gold_present:
        return "fn"
    return "tn"


def _derive(tp: int, fp: int, fn: int, tn: int) -> tuple[float, float, float, float]:
    total = tp + fp + fn + tn
    accuracy = (tp + tn) / total if total else 0.0
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return accuracy, precision, recall, f1


def compute_metrics(judgments: list[Judgment]) -> MetricReport:
    counts = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
    by_field: dict[str, dict[str, int]] = {}
    for j in judgments:
        bucket = _classify(j)
        counts[bucket] += 1
        if j.field is not None:
            by_field.setdefault(j.field, {"tp": 0, "fp": 0, "fn": 0, "tn": 0})[bucket] += 1

    accuracy, precision, recall, f1 = _derive(**counts)
    per_field = {}
    for name, c in sorted(by_field.items()):
        f_acc, f_prec, f_rec, f_f1 = _derive(**c)
        per_field[name] = {
            **c,
            "accuracy": f_acc,
            "precision": f_prec,
            "recall": f_rec,
            "f1": f_f1,
        }
    return MetricReport(
        tp=counts["tp"],
        fp=counts["fp"],
        fn=counts["fn"],
        tn=counts["tn"],
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        per_field=per_field,
    )
