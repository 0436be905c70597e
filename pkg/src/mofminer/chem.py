"""Element tables and chemical formula tokenization.

Shared by the crystal matcher (metal-element comparison) and the
abbreviation resolver (metal-containing name filter).
"""

from __future__ import annotations

import re

from .errors import UnparseableFormula

ELEMENTS = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr",
    "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb",
    "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U", "Np", "Pu",
]

_ELEMENT_SET = set(ELEMENTS)

# Everything outside this set counts as a metal for matching purposes
# (noble gases included here since they never act as framework metals).
NONMETALS = {
    "H", "C", "N", "O", "S", "P", "Se", "F", "Cl", "Br", "I", "B", "Si",
    "He", "Ne", "Ar", "Kr", "Xe", "Rn",
}

METALS = _ELEMENT_SET - NONMETALS

# Lowercase metal names for scanning prose (e.g. "copper(II) nitrate").
METAL_NAMES = {
    "lithium", "beryllium", "sodium", "magnesium", "aluminium", "aluminum",
    "potassium", "calcium", "scandium", "titanium", "vanadium", "chromium",
    "manganese", "iron", "cobalt", "nickel", "copper", "zinc", "gallium",
    "germanium", "arsenic", "rubidium", "strontium", "yttrium", "zirconium",
    "niobium", "molybdenum", "ruthenium", "rhodium", "palladium", "silver",
    "cadmium", "indium", "tin", "antimony", "cesium", "caesium", "barium",
    "lanthanum", "cerium", "praseodymium", "neodymium", "samarium",
    "europium", "gadolinium", "terbium", "dysprosium", "holmium", "erbium",
    "thulium", "ytterbium", "lutetium", "hafnium", "tantalum", "tungsten",
    "rhenium", "osmium", "iridium", "platinum", "gold", "mercury",
    "thallium", "lead", "bismuth", "thorium", "uranium",
}

# Symbol token: not preceded by a letter, not followed by a lowercase letter
# ("Co" in "Compound" must not match; "Co" in "CoCl2" must).
_METAL_SYMBOL_RE = re.compile(
    r"(?<![A-Za-z])(" + "|".join(sorted(METALS, key=len, reverse=True)) + r")(?![a-z])"
)
_METAL_NAME_RE = re.compile(
    r"\b(" + "|".join(sorted(METAL_NAMES, key=len, reverse=True)) + r")\b",
    re.IGNORECASE,
)


def contains_metal(text: str) -> bool:
    """True if the text mentions a metal element, by symbol or by name."""
    return bool(_METAL_SYMBOL_RE.search(text) or _METAL_NAME_RE.search(text))


_TOKEN_RE = re.compile(r"([A-Z][a-z]?)(\d+(?:\.\d+)?)?")


def _parse_fragment(fragment: str) -> dict[str, float]:
    """Parse one formula fragment (no dots), supporting one paren level."""
    counts: dict[str, float] = {}
    pos = 0
    while pos < len(fragment):
        ch = fragment[pos]
        if ch == "(" or ch == "[":
            close = fragment.find(")" if ch == "(" else "]", pos)
            if close < 0:
                raise UnparseableFormula(f"unbalanced parenthesis in {fragment!r}")
            inner = _parse_fragment(fragment[pos + 1 : close])
            m = re.match(r"\d+(?:\.\d+)?", fragment[close + 1 :])
            mult = float(m.group()) if m else 1.0
            for sym, n in inner.items():
                counts[sym] = counts.get(sym, 0.0) + n * mult
            pos = close + 1 + (m.end() if m else 0)
            continue
        m = _TOKEN_RE.match(fragment, pos)
        if not m or m.group(1) not in _ELEMENT_SET:
            raise UnparseableFormula(
                f"unrecognized token at {fragment[pos:pos + 4]!r} in {fragment!r}"
            )
        sym = m.group(1)
        n = float(m.group(2)) if m.group(2) else 1.0
        counts[sym] = counts.get(sym, 0.0) + n
        pos = m.end()
    return counts


def parse_formula(formula: str) -> dict[str, float]:
    """Tokenize an empirical formula into element counts.

    Accepts Hill-style strings ("C6H12O6", CCDC-style "C10 H8 Cd O7"),
    one level of parentheses with multipliers ("Cu(NO3)2") and solvate
    fragments joined by a middle dot ("C10H8·2H2O").
    """
    text = formula.strip()
    if not text:
        raise UnparseableFormula("empty formula")
    total: dict[str, float] = {}
    # ASCII dot separates solvate fragments only when it is not a decimal
    # point inside a fractional count ("H8.5").
    for raw in re.split(r"[·⋅]|(?<!\d)\.|\.(?!\d)", text.replace(" ", "")):
        if not raw:
            continue
        m = re.match(r"(\d+(?:\.\d+)?)(.+)", raw)
        mult = 1.0
        if m and not raw[0].isalpha() and raw[0] not in "([":
            mult = float(m.group(1))
            raw = m.group(2)
        for sym, n in _parse_fragment(raw).items():
            total[sym] = total.get(sym, 0.0) + n * mult
    if not total:
        raise UnparseableFormula(f"no elements found in {formula!r}")
    return total


def metal_counts(elements: dict[str, float]) -> dict[str, float]:
    """Restrict an element multiset to its metal members."""
    return {sym: n for sym, n in elements.items() if sym in METALS}
