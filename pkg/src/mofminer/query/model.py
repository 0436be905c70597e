"""Structured query form, session memory, and result envelope."""

from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass, field

QUERY_TYPES = (
    "property",
    "range",
    "comparison",
    "statistical",
    "paging",
    "reset",
    "greeting",
    "chat",
)

OPERATION_TYPES = ("mean", "max", "min", "count", "none")

# storage key -> short key used inside range bounds
SHORT_KEYS = {
    "pld": "PLD",
    "lcd": "LCD",
    "vsa": "VSA",
    "gsa": "GSA",
    "density": "Density",
    "void_fraction": "Void fraction",
    "molecular_weight": "MW",
    "a": "a",
    "b": "b",
    "c": "c",
}


@dataclass
class Operation:
    type: str = "none"
    value: float | None = None


@dataclass
class ParsedQuery:
    query_type: str
    uses_context: bool = False
    materials: list[str] = field(default_factory=list)
    properties: list[str] = field(default_factory=list)  # display names
    range: dict = field(default_factory=lambda: {"min": {}, "max": {}})
    operation: Operation = field(default_factory=Operation)
    # Free-text transparency trail; not part of query semantics.
    reasoning: list[str] = field(default_factory=list, compare=False)
    page_size: int | None = None
    paged_index: int | None = None

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class QueryResult:
    kind: str
    rows: list[dict] = field(default_factory=list)
    properties: list[str] = field(default_factory=list)
    value: float | None = None
    operation: str | None = None
    witnesses: list[str] = field(default_factory=list)
    count: int = 0
    total: int | None = None
    offset: int | None = None
    page_size: int | None = None
    message: str | None = None

    def to_json(self) -> dict:
        return asdict(self)


MAX_RESULT_SNAPSHOT = 500


@dataclass
class SessionContext:
    capacity: int = 20
    default_page_size: int = 10
    last_query: str | None = None
    last_materials: list[str] = field(default_factory=list)
    last_properties: list[str] = field(default_factory=list)
    last_result: list[str] = field(default_factory=list)  # ccdc_code snapshot
    query_history: deque = field(default_factory=deque)
    page_offset: int = 0

    def __post_init__(self):
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        self.query_history = deque(self.query_history, maxlen=self.capacity)

    def remember(self, question: str, parsed: ParsedQuery) -> None:
        self.query_history.append(
            (question, parsed, list(parsed.materials), list(parsed.properties))
        )
        self.last_query = question

    def update_focus(self, materials, properties) -> None:
        if materials:
            self.last_materials = list(materials)
        if properties:
            self.last_properties = list(properties)

    def snapshot_result(self, codes: list[str]) -> None:
        self.last_result = list(codes[:MAX_RESULT_SNAPSHOT])

    def reset(self) -> None:
        self.last_query = None
        self.last_materials = []
        self.last_properties = []
        self.last_result = []
        self.query_history.clear()
        self.page_offset = 0
