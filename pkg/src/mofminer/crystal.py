"""Two-level crystal matching: lattice comparison with a composition
fallback.

All operations are pure; the optional LLM adjudicator hook only ever
sees borderline lattice scores inside the configured gray band.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .chem import metal_counts, parse_formula
from .errors import (
    EmptyFormula,
    NoComparableFields,
    UnparseableNumber,
)
from .extract import CrystalTableEntry

_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")
_DASHES = {"‐": "-", "‒": "-", "–": "-", "—": "-", "−": "-"}


@dataclass
class CellParameters:
    space_group_canonical: str = ""
    crystal_system: str | None = None
    a: float | None = None
    b: float | None = None
    c: float | None = None
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    elements: dict[str, float] = field(default_factory=dict)
    formula: str = ""


@dataclass
class MatchResult:
    query_id: str
    candidate_id: str
    level: str  # lattice | composition | none
    degree: float
    matched: bool
    formula_sim: float | None = None


@dataclass
class MatchConfig:
    length_rel_tol: float = 0.05
    angle_abs_tol: float = 2.0
    lattice_threshold: float = 0.90
    formula_threshold: float = 0.30
    # When set, each compared field must individually reach the lattice
    # threshold instead of their mean (a strictly stricter reading).
    per_field_strict: bool = False
    gray_band: tuple[float, float] = (0.85, 0.90)


def canonical_space_group(symbol: str) -> str:
    """Normalize a space-group symbol: strip whitespace, flatten Unicode
    subscripts, turn overline marks and dash variants into ASCII minus."""
    text = symbol.strip().translate(_SUBSCRIPTS)
    for dash, ascii_dash in _DASHES.items():
        text = text.replace(dash, ascii_dash)
    # Combining overline after a digit means a roto-inversion axis: 1̄ -> -1
    text = re.sub(r"(\d)[̄̅ݳ¯]", r"-\1", text)
    return re.sub(r"\s+", "", text)


def parse_uncertain_number(value: str | float | int) -> float:
    """Parse a numeric string, dropping a parenthesized uncertainty."""
    if isinstance(value, (int, float)):
        return float(value)
    text = re.sub(r"\(\d+\)\s*$", "", value.strip())
    try:
        return float(text)
    except ValueError as exc:
        raise UnparseableNumber(f"cannot parse number {value!r}") from exc


def canonicalize(entry) -> CellParameters:
    """Normalize a table entry or dataset record into comparable cell
    parameters. Idempotent: canonical inputs pass through unchanged."""
    if isinstance(entry, CellParameters):
        return CellParameters(
            space_group_canonical=canonical_space_group(entry.space_group_canonical),
            crystal_system=entry.crystal_system,
            a=entry.a,
            b=entry.b,
            c=entry.c,
            alpha=entry.alpha,
            beta=entry.beta,
            gamma=entry.gamma,
            elements=dict(entry.elements),
            formula=entry.formula,
        )
    if isinstance(entry, CrystalTableEntry):
        space_group = entry.space_group or ""
        formula = entry.empirical_formula or ""
        system = entry.crystal_system
        cell = (entry.a, entry.b, entry.c, entry.alpha, entry.beta, entry.gamma)
    else:  # dataset MofRecord or similar attribute bag
        space_group = getattr(entry, "space_group", "") or ""
        formula = getattr(entry, "formula", "") or ""
        system = getattr(entry, "crystal_system", None)
        cell = tuple(getattr(entry, name, None) for name in ("a", "b", "c", "alpha", "beta", "gamma"))
        if not formula and getattr(entry, "elements", None):
            elements = dict(entry.elements)
            return CellParameters(
                space_group_canonical=canonical_space_group(space_group),
                crystal_system=system,
                a=cell[0], b=cell[1], c=cell[2],
                alpha=cell[3], beta=cell[4], gamma=cell[5],
                elements=elements,
                formula="".join(f"{s}{int(n) if float(n).is_integer() else n}" for s, n in sorted(elements.items())),
            )
    elements: dict[str, float] = {}
    if formula:
        elements = parse_formula(formula)
    values = [parse_uncertain_number(v) if v is not None else None for v in cell]
    return CellParameters(
        space_group_canonical=canonical_space_group(space_group),
        crystal_system=system.lower() if isinstance(system, str) else system,
        a=values[0], b=values[1], c=values[2],
        alpha=values[3], beta=values[4], gamma=values[5],
        elements=elements,
        formula=formula,
    )


def _length_score(qv: float, cv: float, rel_tol: float) -> float:
    # Scaled by the larger of the two lengths so the score is symmetric.
    scale = rel_tol * max(qv, cv)
    return max(0.0, min(1.0, 1.0 - abs(qv - cv) / scale))


def _angle_score(qv: float, cv: float, abs_tol: float) -> float:
    return max(0.0, min(1.0, 1.0 - abs(qv - cv) / abs_tol))


def field_scores(
    q: CellParameters, c: CellParameters, config: MatchConfig | None = None
) -> dict[str, float]:
    """Per-field comparison scores over the eight key parameters; fields
    absent on either side are omitted."""
    config = config or MatchConfig()
    scores: dict[str, float] = {}
    if q.crystal_system is not None and c.crystal_system is not None:
        scores["crystal_system"] = 1.0 if q.crystal_system == c.crystal_system else 0.0
    if q.space_group_canonical and c.space_group_canonical:
        scores["space_group"] = (
            1.0 if q.space_group_canonical == c.space_group_canonical else 0.0
        )
    for name in ("a", "b", "c"):
        qv, cv = getattr(q, name), getattr(c, name)
        if qv is not None and cv is not None:
            scores[name] = _length_score(qv, cv, config.length_rel_tol)
    for name in ("alpha", "beta", "gamma"):
        qv, cv = getattr(q, name), getattr(c, name)
        if qv is not None and cv is not None:
            scores[name] = _angle_score(qv, cv, config.angle_abs_tol)
    return scores


def match_degree(
    q: CellParameters, c: CellParameters, config: MatchConfig | None = None
) -> float:
    """Mean of the per-field scores over fields present on both sides."""
    scores = field_scores(q, c, config)
    if not scores:
        raise NoComparableFields("no key parameter present on both sides")
    return sum(scores.values()) / len(scores)


def formula_similarity(q: CellParameters, c: CellParameters) -> float:
    """Sørensen–Dice coefficient over element-count multisets."""
    if not q.elements or not c.elements:
        raise EmptyFormula("both element multisets must be non-empty")
    overlap = sum(min(q.elements.get(s, 0.0), c.elements.get(s, 0.0)) for s in q.elements)
    total = sum(q.elements.values()) + sum(c.elements.values())
    return 2.0 * overlap / total


Adjudicator = Callable[[CellParameters, CellParameters, float], bool]


def match(
    q: CellParameters,
    c: CellParameters,
    query_id: str = "",
    candidate_id: str = "",
    config: MatchConfig | None = None,
    adjudicator: Adjudicator | None = None,
) -> MatchResult:
    """Short-circuit two-level match: lattice first, composition fallback.

    A lattice match never evaluates the composition level. The fallback
    requires identical metal-element submultisets and formula similarity
    above the configured threshold.
    """
    config = config or MatchConfig()
    scores = field_scores(q, c, config)
    if not scores:
        raise NoComparableFields("no key parameter present on both sides")
    degree = sum(scores.values()) / len(scores)

    if config.per_field_strict:
        lattice_ok = all(s >= config.lattice_threshold for s in scores.values())
    else:
        lattice_ok = degree >= config.lattice_threshold
    if (
        not lattice_ok
        and adjudicator is not None
        and config.gray_band[0] <= degree < config.gray_band[1]
    ):
        lattice_ok = bool(adjudicator(q, c, degree))
    if lattice_ok:
        return MatchResult(query_id, candidate_id, "lattice", degree, True)

    sim = formula_similarity(q, c)
    metals_equal = metal_counts(q.elements) == metal_counts(c.elements)
    if metals_equal and sim >= config.formula_threshold:
        return MatchResult(query_id, candidate_id, "composition", degree, True, formula_sim=sim)
    return MatchResult(query_id, candidate_id, "none", degree, False, formula_sim=sim)


def match_result_to_json(result: MatchResult) -> dict:
    return {
        "query_id": result.query_id,
        "candidate_id": result.candidate_id,
        "level": result.level,
        "degree": result.degree,
        "formula_sim": result.formula_sim,
        "matched": result.matched,
    }
