from .cif import CifModel, emit_cif, parse_cif
from .store import (
    MofRecord,
    PoreProperties,
    PropertyFilter,
    Store,
    aggregate,
    canonical_property,
    display_name,
    histogram,
    load_dataset,
    query_records,
)
from .viz import viz_payload

__all__ = [
    "CifModel",
    "MofRecord",
    "PoreProperties",
    "PropertyFilter",
    "Store",
    "aggregate",
    "canonical_property",
    "display_name",
    "emit_cif",
    "histogram",
    "load_dataset",
    "parse_cif",
    "query_records",
    "viz_payload",
]
