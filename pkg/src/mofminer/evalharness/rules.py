"""Cell-level equivalence: a rule cascade with an embedder fallback.

Each rule either decides (equivalent / not equivalent) or abstains;
only abstention reaches the embedder. Every rule is symmetric in its
two arguments.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from ..chem import parse_formula
from ..errors import EmbedderFailure, UnparseableFormula
from .embed import SIMILARITY_THRESHOLD, Embedder, sentence_similarity

# Table S2 routing: source/quantity fields carry chemical nomenclature,
# condition fields carry general prose.
CHEMICAL_FIELDS = {
    "metal_source",
    "organic_linkers_source",
    "modulator_source",
    "solvent_source",
    "quantity_of_metal",
    "quantity_of_organic_linkers",
    "quantity_of_modulator",
    "quantity_of_solvent",
}


@dataclass
class RuleVerdict:
    equivalent: bool | None  # None = undecided
    rule_id: str | None = None


_TEMP_NORM_RE = re.compile(r"(\d+(?:\.\d+)?)\s*(?:°\s*c|℃|º\s*c|o\s*c)\b")
_HOURS_NORM_RE = re.compile(r"(\d+(?:\.\d+)?)\s*(?:hours|hrs|hr|h)\b")


def _norm(text: str) -> str:
    text = unicodedata.normalize("NFKC", text).casefold()
    text = _TEMP_NORM_RE.sub(r"\1c", text)
    text = _HOURS_NORM_RE.sub(r"\1h", text)
    return re.sub(r"[\s‐-―_-]+", "", text)


_PERCENT_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*%\s*$")
_DECIMAL_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*$")


def _as_fraction(text: str) -> float | None:
    m = _PERCENT_RE.match(text)
    if m:
        return float(m.group(1)) / 100.0
    m = _DECIMAL_RE.match(text)
    if m:
        return float(m.group(1))
    return None


_PAREN_RE = re.compile(r"^\s*(.+?)\s*\(\s*([^()]+?)\s*\)\s*$")


def _paren_parts(text: str) -> tuple[str, str] | None:
    m = _PAREN_RE.match(text)
    return (m.group(1), m.group(2)) if m else None


_FORMULA_TOKEN_RE = re.compile(r"[A-Za-z0-9()\[\]·⋅.]+")


def _formulas(text: str) -> list[frozenset]:
    found = []
    for token in _FORMULA_TOKEN_RE.findall(text):
        if not re.search(r"[A-Z]", token) or not re.search(r"[\d()]", token):
            continue
        try:
            counts = parse_formula(token)
        except UnparseableFormula:
            continue
        found.append(frozenset(counts.items()))
    return found


_QTY_RE = re.compile(r"(\d+(?:\.\d+)?)\s*(mmol|mol|mg|g|kg|µL|µl|uL|mL|ml|L)\b")
_VOLUME_UNITS = {"µl": "µL", "ul": "µL", "ml": "mL", "l": "L"}


def _quantities(text: str) -> list[tuple[float, str]]:
    out = []
    for m in _QTY_RE.finditer(text):
        unit = m.group(2)
        unit = _VOLUME_UNITS.get(unit.lower(), unit)
        out.append((float(m.group(1)), unit))
    return out


def _volumes(quantities) -> list[tuple[float, str]]:
    return [(v, u) for v, u in quantities if u in ("µL", "mL", "L")]


_YIELD_RE = re.compile(r"(\d+(?:\.\d+)?)\s*%")

_EQUIPMENT_KEYWORDS = (
    "stainless steel",
    "autoclave",
    "teflon",
    "vial",
    "beaker",
    "flask",
    "oven",
    "reactor",
    "bomb",
    "tube",
    "microwave",
)


def _equipment_terms(text: str) -> frozenset:
    lowered = re.sub(r"[\s‐-―_-]+", " ", text.casefold())
    return frozenset(k for k in _EQUIPMENT_KEYWORDS if k in lowered)


def _rule_cascade(a: str, b: str) -> RuleVerdict:
    if _norm(a) == _norm(b):
        return RuleVerdict(True, "exact")

    fa, fb = _as_fraction(a), _as_fraction(b)
    if fa is not None and fb is not None and ("%" in a or "%" in b):
        return RuleVerdict(abs(fa - fb) < 1e-9, "percentage")

    for left, right in ((a, b), (b, a)):
        parts = _paren_parts(left)
        if parts is not None:
            main, inner = parts
            if _norm(right) in (_norm(main), _norm(inner)):
                return RuleVerdict(True, "paren-abbrev")

    formulas_a, formulas_b = _formulas(a), _formulas(b)
    if formulas_a and formulas_b:
        if sorted(formulas_a, key=sorted) == sorted(formulas_b, key=sorted):
            return RuleVerdict(True, "formula")
        if not set(formulas_a) & set(formulas_b):
            return RuleVerdict(False, "formula")

    ya, yb = _YIELD_RE.findall(a), _YIELD_RE.findall(b)
    if ya and yb and ("yield" in a.lower() or "yield" in b.lower()):
        return RuleVerdict(sorted(map(float, ya)) == sorted(map(float, yb)), "yield")

    ea, eb = _equipment_terms(a), _equipment_terms(b)
    if ea and eb:
        if ea <= eb or eb <= ea:
            return RuleVerdict(True, "equipment")
        if not ea & eb:
            return RuleVerdict(False, "equipment")

    qa, qb = _quantities(a), _quantities(b)
    if qa and qb and sorted(qa) == sorted(qb):
        return RuleVerdict(True, "amount-mass")

    for many_text, one_text in ((a, b), (b, a)):
        many, one = _volumes(_quantities(many_text)), _volumes(_quantities(one_text))
        if len(many) >= 2 and len(one) == 1:
            # An explicit "(total 10 mL)" annotation names the sum directly;
            # otherwise the component volumes must add up to the single value.
            total_m = re.search(
                r"total\s+(\d+(?:\.\d+)?)\s*(µL|uL|mL|ml|L)\b", many_text, re.IGNORECASE
            )
            if total_m:
                unit = _VOLUME_UNITS.get(total_m.group(2).lower(), total_m.group(2))
                if unit == one[0][1] and abs(float(total_m.group(1)) - one[0][0]) < 1e-9:
                    return RuleVerdict(True, "solvent-accumulation")
            units = {u for _, u in many}
            if units == {one[0][1]} and abs(sum(v for v, _ in many) - one[0][0]) < 1e-9:
                return RuleVerdict(True, "solvent-accumulation")

    return RuleVerdict(None)


def cells_equivalent(
    a: str,
    b: str,
    field: str = "",
    embedder: Embedder | None = None,
    chemical_embedder: Embedder | None = None,
) -> tuple[RuleVerdict, float | None]:
    """Decide whether two cell texts describe the same fact.

    Returns the verdict and, when the embedder was consulted, the
    cosine similarity it produced. Source-type fields route to the
    chemical embedder when one is provided.
    """
    verdict = _rule_cascade(a, b)
    if verdict.equivalent is not None:
        return verdict, None
    chosen = embedder
    if field in CHEMICAL_FIELDS and chemical_embedder is not None:
        chosen = chemical_embedder
    if chosen is None:
        raise EmbedderFailure(
            f"rule cascade undecided for field {field!r} and no embedder configured"
        )
    similarity = sentence_similarity(a, b, chosen)
    return RuleVerdict(similarity >= SIMILARITY_THRESHOLD, "embedding"), similarity
