"""Crystallographic metadata store: load, filter, aggregate.

Records live in a JSON-lines file, one per deposited structure. The
store is immutable after load; lookups go through a code index and
per-property sorted indexes for range scans.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import EmptyStore, UnknownProperty, UnreadableFile


@dataclass
class PoreProperties:
    pld: float
    lcd: float
    density: float
    vsa: float
    gsa: float
    void_fraction: float


@dataclass
class MofRecord:
    ccdc_code: str
    chemical_name: str
    space_group: str
    crystal_system: str
    a: float
    b: float
    c: float
    alpha: float
    beta: float
    gamma: float
    elements: dict[str, float]
    molecular_weight: float
    pore: PoreProperties
    ccdc_number: str | None = None
    abbreviation: str | None = None
    doi: str | None = None
    url: str | None = None


# storage key -> (display name, accessor)
NUMERIC_PROPERTIES = {
    "pld": ("PLD (Å)", lambda r: r.pore.pld),
    "lcd": ("LCD (Å)", lambda r: r.pore.lcd),
    "density": ("Density (g/cm3)", lambda r: r.pore.density),
    "vsa": ("VSA (m2/cm3)", lambda r: r.pore.vsa),
    "gsa": ("GSA (m2/g)", lambda r: r.pore.gsa),
    "void_fraction": ("Void fraction", lambda r: r.pore.void_fraction),
    "molecular_weight": ("Molecular weight (g/mol)", lambda r: r.molecular_weight),
    "a": ("a (Å)", lambda r: r.a),
    "b": ("b (Å)", lambda r: r.b),
    "c": ("c (Å)", lambda r: r.c),
}

# User-facing aliases, lowercased. Display names resolve to themselves.
PROPERTY_ALIASES = {
    "pld": "pld",
    "pld (å)": "pld",
    "pld å": "pld",
    "pore limiting diameter": "pld",
    "lcd": "lcd",
    "lcd (å)": "lcd",
    "lcd å": "lcd",
    "largest cavity diameter": "lcd",
    "density": "density",
    "density (g/cm3)": "density",
    "crystal density": "density",
    "vsa": "vsa",
    "vsa (m2/cm3)": "vsa",
    "vsa m2/cm3": "vsa",
    "volumetric surface area": "vsa",
    "volumetric accessible surface area": "vsa",
    "accessible_surface_area (m2/cm3)": "vsa",
    "gsa": "gsa",
    "gsa (m2/g)": "gsa",
    "gravimetric surface area": "gsa",
    "gravimetric accessible surface area": "gsa",
    "surface area": "gsa",
    "void fraction": "void_fraction",
    "void_fraction": "void_fraction",
    "molecular weight": "molecular_weight",
    "molecular_weight": "molecular_weight",
    "molecular weight (g/mol)": "molecular_weight",
    "mw": "molecular_weight",
    "a": "a",
    "a (å)": "a",
    "b": "b",
    "b (å)": "b",
    "c": "c",
    "c (å)": "c",
}


def canonical_property(name: str) -> str:
    key = PROPERTY_ALIASES.get(name.strip().lower())
    if key is None:
        raise UnknownProperty(f"unknown property {name!r}")
    return key


def display_name(key: str) -> str:
    return NUMERIC_PROPERTIES[key][0]


@dataclass
class Store:
    records: list[MofRecord]
    by_code: dict[str, MofRecord]
    numeric_index: dict[str, list[tuple[float, str]]]
    load_errors: list[tuple[int, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def get(self, code: str) -> MofRecord | None:
        return self.by_code.get(code.strip().upper())

    def find_material(self, token: str) -> MofRecord | None:
        """Resolve a material mention: CCDC code, abbreviation, or name."""
        record = self.get(token)
        if record is not None:
            return record
        lowered = token.strip().lower()
        for r in self.records:
            if r.abbreviation and r.abbreviation.lower() == lowered:
                return r
        for r in self.records:
            if r.chemical_name.lower() == lowered:
                return r
        return None

    def series(self, prefix: str) -> list[MofRecord]:
        """Records whose abbreviation or name starts with the prefix."""
        lowered = prefix.strip().lower()
        return [
            r
            for r in self.records
            if (r.abbreviation or "").lower().startswith(lowered)
            or r.chemical_name.lower().startswith(lowered)
        ]


def _parse_record(row: dict) -> MofRecord:
    pore_row = row["pore"]
    pore = PoreProperties(
        pld=float(pore_row["pld"]),
        lcd=float(pore_row["lcd"]),
        density=float(pore_row["density"]),
        vsa=float(pore_row["vsa"]),
        gsa=float(pore_row["gsa"]),
        void_fraction=float(pore_row["void_fraction"]),
    )
    record = MofRecord(
        ccdc_code=str(row["ccdc_code"]).strip(),
        ccdc_number=row.get("ccdc_number"),
        chemical_name=row["chemical_name"],
        abbreviation=row.get("abbreviation"),
        doi=row.get("doi"),
        url=row.get("url"),
        space_group=row["space_group"],
        crystal_system=row["crystal_system"],
        a=float(row["a"]),
        b=float(row["b"]),
        c=float(row["c"]),
        alpha=float(row["alpha"]),
        beta=float(row["beta"]),
        gamma=float(row["gamma"]),
        elements={k: float(v) for k, v in row["elements"].items()},
        molecular_weight=float(row["molecular_weight"]),
        pore=pore,
    )
    if not record.ccdc_code:
        raise ValueError("empty ccdc_code")
    for name in ("a", "b", "c"):
        if getattr(record, name) <= 0:
            raise ValueError(f"cell length {name} must be positive")
    for name in ("alpha", "beta", "gamma"):
        if not 0 < getattr(record, name) < 180:
            raise ValueError(f"cell angle {name} out of (0, 180)")
    if pore.lcd < pore.pld:
        raise ValueError("lcd must be >= pld")
    if any(v < 0 for v in (pore.pld, pore.lcd, pore.density, pore.vsa, pore.gsa)):
        raise ValueError("pore properties must be non-negative")
    if not 0 <= pore.void_fraction <= 1:
        raise ValueError("void_fraction out of [0, 1]")
    return record


def build_store(records: list[MofRecord], load_errors=None) -> Store:
    by_code = {r.ccdc_code.upper(): r for r in records}
    numeric_index = {}
    for key, (_, accessor) in NUMERIC_PROPERTIES.items():
        numeric_index[key] = sorted((accessor(r), r.ccdc_code) for r in records)
    return Store(
        records=records,
        by_code=by_code,
        numeric_index=numeric_index,
        load_errors=list(load_errors or []),
    )


def load_dataset(path: str | Path) -> Store:
    """Load a JSON-lines dataset; malformed lines are collected with
    their line numbers instead of aborting the load."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UnreadableFile(f"cannot read dataset {path}: {exc}") from exc
    records: list[MofRecord] = []
    seen: set[str] = set()
    errors: list[tuple[int, str]] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = _parse_record(json.loads(line))
            code = record.ccdc_code.upper()
            if code in seen:
                raise ValueError(f"DuplicateKey: {record.ccdc_code}")
            seen.add(code)
            records.append(record)
        except (ValueError, KeyError, TypeError) as exc:
            errors.append((lineno, str(exc)))
    return build_store(records, errors)


PropertyFilter = dict[str, tuple[float | None, float | None]]


def query_records(store: Store, filter: PropertyFilter) -> list[MofRecord]:
    """Conjunction of closed-interval bounds; result ordered by code."""
    if not filter:
        return sorted(store.records, key=lambda r: r.ccdc_code)
    surviving: set[str] | None = None
    for name, (lo, hi) in filter.items():
        key = canonical_property(name)
        index = store.numeric_index[key]
        left = 0 if lo is None else bisect.bisect_left(index, (lo, ""))
        right = len(index) if hi is None else bisect.bisect_right(index, (hi, "￿"))
        codes = {code for _, code in index[left:right]}
        surviving = codes if surviving is None else surviving & codes
        if not surviving:
            return []
    return sorted(
        (store.by_code[c.upper()] for c in surviving), key=lambda r: r.ccdc_code
    )


def aggregate(
    store: Store,
    property_name: str,
    op: str,
    filter: PropertyFilter | None = None,
    records: list[MofRecord] | None = None,
) -> tuple[float, list[str]]:
    """Aggregate a numeric property; max/min also return witness codes."""
    key = canonical_property(property_name)
    accessor = NUMERIC_PROPERTIES[key][1]
    pool = records if records is not None else store.records
    if filter:
        selected_codes = {r.ccdc_code for r in query_records(store, filter)}
        pool = [r for r in pool if r.ccdc_code in selected_codes]
    if op == "count":
        return float(len(pool)), []
    if not pool:
        raise EmptyStore("no records to aggregate")
    values = [(accessor(r), r.ccdc_code) for r in pool]
    if op == "mean":
        return sum(v for v, _ in values) / len(values), []
    if op == "max":
        best = max(v for v, _ in values)
        return best, sorted(code for v, code in values if v == best)
    if op == "min":
        best = min(v for v, _ in values)
        return best, sorted(code for v, code in values if v == best)
    raise ValueError(f"unknown aggregate op {op!r}")


def histogram(store: Store, property_name: str, bin_width: float) -> list[dict]:
    """Fixed-width histogram for the corpus statistics views."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    key = canonical_property(property_name)
    accessor = NUMERIC_PROPERTIES[key][1]
    if not store.records:
        raise EmptyStore("empty store")
    values = [accessor(r) for r in store.records]
    lo = min(values)
    start = (lo // bin_width) * bin_width
    bins: dict[int, int] = {}
    for v in values:
        bins[int((v - start) // bin_width)] = bins.get(int((v - start) // bin_width), 0) + 1
    return [
        {
            "lo": start + i * bin_width,
            "hi": start + (i + 1) * bin_width,
            "count": bins[i],
        }
        for i in sorted(bins)
    ]


def record_to_json(record: MofRecord) -> dict:
    return {
        "ccdc_code": record.ccdc_code,
        "ccdc_number": record.ccdc_number,
        "chemical_name": record.chemical_name,
        "abbreviation": record.abbreviation,
        "doi": record.doi,
        "url": record.url,
        "space_group": record.space_group,
        "crystal_system": record.crystal_system,
        "a": record.a,
        "b": record.b,
        "c": record.c,
        "alpha": record.alpha,
        "beta": record.beta,
        "gamma": record.gamma,
        "elements": dict(record.elements),
        "molecular_weight": record.molecular_weight,
        "pore": {
            "pld": record.pore.pld,
            "lcd": record.pore.lcd,
            "density": record.pore.density,
            "vsa": record.pore.vsa,
            "gsa": record.pore.gsa,
            "void_fraction": record.pore.void_fraction,
        },
    }
