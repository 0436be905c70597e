"""Token cost accounting with exact decimal arithmetic."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

from ..errors import UnknownModelPrice

MICRO = Decimal(1_000_000)


@dataclass(frozen=True)
class LedgerEntry:
    doc_id: str
    node: str
    model_id: str
    input_tokens: int
    output_tokens: int
    cost_usd: Decimal


class CostLedger:
    """Append-only charge log. Prices are USD per 1M tokens, kept as
    Decimal so totals carry no binary-float drift."""

    def __init__(self, price_table: dict[str, tuple[Decimal, Decimal]] | None = None):
        self.price_table: dict[str, tuple[Decimal, Decimal]] = dict(price_table or {})
        self.entries: list[LedgerEntry] = []
        self._lock = threading.Lock()

    @classmethod
    def from_config(cls, path: str | Path) -> "CostLedger":
        """Load a price table from a JSON file:
        {"model": {"input_per_1m": "0.15", "output_per_1m": "0.60"}, ...}"""
        data = json.loads(Path(path).read_text())
        table = {
            model: (Decimal(str(row["input_per_1m"])), Decimal(str(row["output_per_1m"])))
            for model, row in data.items()
        }
        return cls(table)

    def set_price(self, model_id: str, input_per_1m, output_per_1m) -> None:
        self.price_table[model_id] = (
            Decimal(str(input_per_1m)),
            Decimal(str(output_per_1m)),
        )

    def cost_of(self, model_id: str, input_tokens: int, output_tokens: int) -> Decimal:
        if model_id not in self.price_table:
            raise UnknownModelPrice(f"no price configured for {model_id!r}")
        p_in, p_out = self.price_table[model_id]
        return (Decimal(input_tokens) * p_in + Decimal(output_tokens) * p_out) / MICRO

    def add(
        self,
        doc_id: str,
        node: str,
        model_id: str,
        input_tokens: int,
        output_tokens: int,
    ) -> LedgerEntry:
        entry = LedgerEntry(
            doc_id=doc_id,
            node=node,
            model_id=model_id,
            input_tokens=input_tokens,
            output_tokens=output_tokens,
            cost_usd=self.cost_of(model_id, input_tokens, output_tokens),
        )
        with self._lock:
            self.entries.append(entry)
        return entry

    def total(self) -> Decimal:
        return sum((e.cost_usd for e in self.entries), Decimal(0))

    def total_by_doc(self) -> dict[str, Decimal]:
        out: dict[str, Decimal] = {}
        for e in self.entries:
            out[e.doc_id] = out.get(e.doc_id, Decimal(0)) + e.cost_usd
        return out

    def total_by_node(self) -> dict[str, Decimal]:
        out: dict[str, Decimal] = {}
        for e in self.entries:
            out[e.node] = out.get(e.node, Decimal(0)) + e.cost_usd
        return out


def ledger_add(ledger: CostLedger, doc_id: str, node: str, response, model_id: str) -> LedgerEntry:
    """Charge one gateway response to the ledger."""
    return ledger.add(doc_id, node, model_id, response.input_tokens, response.output_tokens)
