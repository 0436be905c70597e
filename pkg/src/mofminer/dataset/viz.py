"""Ball-and-stick payloads: fractional -> cartesian conversion and bond
inference from covalent radii."""

from __future__ import annotations

import json
import math
from importlib import resources

from .cif import CifModel

_RADII: dict[str, float] = json.loads(
    resources.files("mofminer.data").joinpath("covalent_radii.json").read_text()
)
_DEFAULT_RADIUS = 1.5
BOND_SCALE = 1.2


def lattice_vectors(a, b, c, alpha, beta, gamma) -> list[list[float]]:
    """Row vectors of the cell in the standard crystallographic frame:
    a along x, b in the xy plane."""
    ra, rb, rg = (math.radians(v) for v in (alpha, beta, gamma))
    cos_a, cos_b, cos_g = math.cos(ra), math.cos(rb), math.cos(rg)
    sin_g = math.sin(rg)
    volume_factor = math.sqrt(
        max(0.0, 1.0 - cos_a**2 - cos_b**2 - cos_g**2 + 2.0 * cos_a * cos_b * cos_g)
    )
    return [
        [a, 0.0, 0.0],
        [b * cos_g, b * sin_g, 0.0],
        [c * cos_b, c * (cos_a - cos_b * cos_g) / sin_g, c * volume_factor / sin_g],
    ]


def _to_cartesian(frac, vectors):
    return [
        sum(frac[k] * vectors[k][i] for k in range(3))
        for i in range(3)
    ]


def viz_payload(model: CifModel) -> dict:
    """JSON document for the 3D viewer: cartesian atoms, inferred bonds,
    and the cell geometry. Pure function of the model."""
    cell = model.cell
    vectors = lattice_vectors(cell.a, cell.b, cell.c, cell.alpha, cell.beta, cell.gamma)
    atoms = []
    for atom in model.atoms:
        x, y, z = _to_cartesian((atom.x, atom.y, atom.z), vectors)
        atoms.append({"element": atom.element, "x": x, "y": y, "z": z})
    bonds = []
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            cutoff = BOND_SCALE * (
                _RADII.get(atoms[i]["element"], _DEFAULT_RADIUS)
                + _RADII.get(atoms[j]["element"], _DEFAULT_RADIUS)
            )
            dist = math.dist(
                (atoms[i]["x"], atoms[i]["y"], atoms[i]["z"]),
                (atoms[j]["x"], atoms[j]["y"], atoms[j]["z"]),
            )
            if 0.0 < dist <= cutoff:
                bonds.append([i, j])
    return {
        "cell": {
            "a": cell.a,
            "b": cell.b,
            "c": cell.c,
            "alpha": cell.alpha,
            "beta": cell.beta,
            "gamma": cell.gamma,
            "space_group": cell.space_group_canonical,
            "vectors": vectors,
        },
        "atoms": atoms,
        "bonds": bonds,
    }
