"""Minimal CIF reader/writer for the visualization path.

Reads the cell block, the space group, and the atom-site loop; every
other tag is ignored. Not a general CIF implementation (no symmetry
expansion, no multi-block files).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..crystal import CellParameters, canonical_space_group
from ..errors import MalformedLoop, MissingCellBlock

_CELL_TAGS = {
    "_cell_length_a": "a",
    "_cell_length_b": "b",
    "_cell_length_c": "c",
    "_cell_angle_alpha": "alpha",
    "_cell_angle_beta": "beta",
    "_cell_angle_gamma": "gamma",
}

_SPACE_GROUP_TAGS = ("_symmetry_space_group_name_h-m", "_space_group_name_h-m_alt")

_ELEMENT_RE = re.compile(r"^([A-Z][a-z]?)")


@dataclass
class Atom:
    element: str
    x: float
    y: float
    z: float


@dataclass
class CifModel:
    cell: CellParameters
    atoms: list[Atom] = field(default_factory=list)
    title: str | None = None


def _strip_uncertainty(token: str) -> float:
    return float(re.sub(r"\(\d+\)$", "", token))


def _unquote(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
        return value[1:-1]
    return value


def _element_of(type_symbol: str) -> str:
    m = _ELEMENT_RE.match(type_symbol.strip())
    if not m:
        raise MalformedLoop(f"bad atom type symbol {type_symbol!r}")
    return m.group(1)


def parse_cif(data: bytes | str) -> CifModel:
    """Parse cell parameters, space group and atom sites from CIF text."""
    text = data.decode("utf-8", errors="replace") if isinstance(data, bytes) else data
    lines = text.splitlines()
    values: dict[str, float] = {}
    space_group = ""
    title = None
    atoms: list[Atom] = []

    i = 0
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line or line.startswith("#"):
            continue
        if line.startswith("data_"):
            title = line[5:] or None
            continue
        if line.lower() == "loop_":
            headers: list[str] = []
            while i < len(lines) and lines[i].strip().startswith("_"):
                headers.append(lines[i].strip().split()[0].lower())
                i += 1
            rows: list[list[str]] = []
            while i < len(lines):
                row_line = lines[i].strip()
                if not row_line or row_line.startswith(("_", "#")) or row_line.lower() == "loop_" or row_line.startswith("data_"):
                    break
                rows.append(row_line.split())
                i += 1
            if not any(h.startswith("_atom_site") for h in headers):
                continue
            try:
                col = {
                    "element": headers.index("_atom_site_type_symbol")
                    if "_atom_site_type_symbol" in headers
                    else headers.index("_atom_site_label"),
                    "x": headers.index("_atom_site_fract_x"),
                    "y": headers.index("_atom_site_fract_y"),
                    "z": headers.index("_atom_site_fract_z"),
                }
            except ValueError as exc:
                raise MalformedLoop(f"atom site loop lacks a needed column: {exc}") from exc
            for row in rows:
                if len(row) != len(headers):
                    raise MalformedLoop(
                        f"atom row has {len(row)} fields, expected {len(headers)}: {row}"
                    )
                try:
                    atoms.append(
                        Atom(
                            element=_element_of(row[col["element"]]),
                            x=_strip_uncertainty(row[col["x"]]),
                            y=_strip_uncertainty(row[col["y"]]),
                            z=_strip_uncertainty(row[col["z"]]),
                        )
                    )
                except ValueError as exc:
                    raise MalformedLoop(f"bad atom row {row}: {exc}") from exc
            continue
        if line.startswith("_"):
            parts = line.split(None, 1)
            tag = parts[0].lower()
            value = parts[1] if len(parts) > 1 else ""
            if tag in _CELL_TAGS and value:
                try:
                    values[_CELL_TAGS[tag]] = _strip_uncertainty(value.split()[0])
                except ValueError:
                    pass
            elif tag in _SPACE_GROUP_TAGS and value:
                space_group = _unquote(value)

    missing = [t for t in ("a", "b", "c") if t not in values]
    if missing:
        raise MissingCellBlock(f"cell lengths missing: {missing}")
    for angle in ("alpha", "beta", "gamma"):
        values.setdefault(angle, 90.0)

    element_counts: dict[str, float] = {}
    for atom in atoms:
        element_counts[atom.element] = element_counts.get(atom.element, 0.0) + 1.0
    cell = CellParameters(
        space_group_canonical=canonical_space_group(space_group),
        a=values["a"],
        b=values["b"],
        c=values["c"],
        alpha=values["alpha"],
        beta=values["beta"],
        gamma=values["gamma"],
        elements=element_counts,
        formula="".join(
            f"{sym}{int(n)}" for sym, n in sorted(element_counts.items())
        ),
    )
    return CifModel(cell=cell, atoms=atoms, title=title)


def emit_cif(model: CifModel) -> str:
    """Write the minimal tag set back out; parse_cif(emit_cif(m)) == m."""
    lines = [f"data_{model.title or ''}"]
    if model.cell.space_group_canonical:
        lines.append(f"_symmetry_space_group_name_H-M '{model.cell.space_group_canonical}'")
    for tag, attr in (
        ("_cell_length_a", "a"),
        ("_cell_length_b", "b"),
        ("_cell_length_c", "c"),
        ("_cell_angle_alpha", "alpha"),
        ("_cell_angle_beta", "beta"),
        ("_cell_angle_gamma", "gamma"),
    ):
        lines.append(f"{tag} {getattr(model.cell, attr)!r}")
    if model.atoms:
        lines.append("loop_")
        lines.append("_atom_site_type_symbol")
        lines.append("_atom_site_fract_x")
        lines.append("_atom_site_fract_y")
        lines.append("_atom_site_fract_z")
        for atom in model.atoms:
            lines.append(f"{atom.element} {atom.x!r} {atom.y!r} {atom.z!r}")
    return "\n".join(lines) + "\n"
