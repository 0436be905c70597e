"""Query engine: dual-engine parsing, context resolution, execution
against the dataset store, and response composition."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import replace

from ..dataset.store import (
    NUMERIC_PROPERTIES,
    Store,
    aggregate,
    canonical_property,
    display_name,
    query_records,
)
from ..errors import (
    ContextUnavailable,
    EmptyStore,
    FixtureMissing,
    ProviderUnavailable,
    SchemaViolation,
    UnknownMaterial,
    UnknownProperty,
)
from .model import ParsedQuery, QueryResult, SessionContext
from .rules import canonicalize_parsed, parse_rules

log = logging.getLogger(__name__)


def parse_query(
    text: str,
    ctx: SessionContext,
    gateway=None,
    mode: str = "rules_only",
) -> ParsedQuery:
    """Parse a question with the primary engine, falling back to rules.

    Unparseable input degrades to query_type chat, never an error.
    """
    if not text.strip():
        return ParsedQuery(query_type="chat", reasoning=["empty question"])
    if mode == "llm_primary" and gateway is not None:
        try:
            response = gateway.complete_json("query_parse", text, node="query-parse")
            return canonicalize_parsed(response.parsed_json)
        except (SchemaViolation, FixtureMissing, ProviderUnavailable) as exc:
            log.warning("LLM parser unavailable, using rule parser: %s", exc)
    return parse_rules(text)


def apply_context(q: ParsedQuery, ctx: SessionContext) -> ParsedQuery:
    """Resolve implicit references from session memory."""
    updated = replace(q, materials=list(q.materials), properties=list(q.properties))
    if updated.uses_context and not updated.materials and updated.query_type not in (
        "paging",
        "reset",
        "greeting",
        "chat",
    ):
        if not ctx.last_materials:
            raise ContextUnavailable(
                "the question refers to an earlier material, but the session has none"
            )
        updated.materials = list(ctx.last_materials)
    if updated.query_type == "property" and not updated.properties and ctx.last_properties:
        updated.properties = list(ctx.last_properties)
    return updated


def _require_properties(q: ParsedQuery) -> list[str]:
    if not q.properties:
        raise UnknownProperty("no recognizable property in the question")
    return q.properties


def _property_value(record, prop_display: str) -> float:
    key = canonical_property(prop_display)
    return NUMERIC_PROPERTIES[key][1](record)


def _material_rows(store: Store, materials, properties) -> list[dict]:
    rows = []
    for token in materials:
        record = store.find_material(token)
        if record is None:
            raise UnknownMaterial(f"no record found for {token!r}")
        row = {"material": token, "ccdc_code": record.ccdc_code}
        for prop in properties:
            row[prop] = _property_value(record, prop)
        rows.append(row)
    return rows


def _range_filter(bounds: dict) -> dict:
    filter: dict = {}
    for side in ("min", "max"):
        for name, value in (bounds.get(side) or {}).items():
            key = canonical_property(name)
            lo, hi = filter.get(key, (None, None))
            filter[key] = (value, hi) if side == "min" else (lo, value)
    return filter


def _record_rows(records, filter_keys) -> list[dict]:
    rows = []
    for record in records:
        row = {"ccdc_code": record.ccdc_code}
        for key in filter_keys:
            row[display_name(key)] = NUMERIC_PROPERTIES[key][1](record)
        rows.append(row)
    return rows


def execute(q: ParsedQuery, ctx: SessionContext, store: Store) -> QueryResult:
    """Dispatch a canonical query against the store and update the
    session context on success."""
    if q.query_type == "reset":
        ctx.reset()
        return QueryResult(kind="reset", message="Context cleared.")
    if q.query_type == "greeting":
        return QueryResult(
            kind="greeting",
            message="Hello! Ask me about MOF structures, properties, and synthesis.",
        )
    if q.query_type == "chat":
        return QueryResult(
            kind="chat",
            message=(
                "I can answer property, range, comparison and statistical "
                "questions over the crystallographic dataset."
            ),
        )
    if q.query_type == "paging":
        size = q.page_size or ctx.default_page_size
        start = q.paged_index if q.paged_index is not None else ctx.page_offset
        codes = ctx.last_result[start : start + size]
        records = [store.get(code) for code in codes]
        keys = [canonical_property(p) for p in ctx.last_properties] if ctx.last_properties else []
        rows = _record_rows([r for r in records if r is not None], keys)
        ctx.page_offset = start + len(codes)
        return QueryResult(
            kind="paging",
            rows=rows,
            properties=[display_name(k) for k in keys],
            count=len(rows),
            total=len(ctx.last_result),
            offset=start,
            page_size=size,
        )

    if q.query_type in ("property", "comparison"):
        properties = _require_properties(q)
        if not q.materials:
            raise UnknownMaterial("no material named in the question")
        rows = _material_rows(store, q.materials, properties)
        result = QueryResult(
            kind=q.query_type,
            rows=rows,
            properties=list(properties),
            count=len(rows),
        )
        ctx.update_focus(q.materials, properties)
        ctx.snapshot_result([r["ccdc_code"] for r in rows])
        return result

    if q.query_type == "range":
        filter = _range_filter(q.range)
        if not filter:
            raise UnknownProperty("range query without bounds")
        records = query_records(store, {k: v for k, v in filter.items()})
        size = q.page_size or ctx.default_page_size
        page = records[:size]
        rows = _record_rows(page, list(filter))
        ctx.update_focus(q.materials, [display_name(k) for k in filter])
        ctx.snapshot_result([r.ccdc_code for r in records])
        ctx.page_offset = len(page)
        return QueryResult(
            kind="range",
            rows=rows,
            properties=[display_name(k) for k in filter],
            count=len(rows),
            total=len(records),
            offset=0,
            page_size=size,
        )

    if q.query_type == "statistical":
        properties = _require_properties(q)
        prop = properties[0]
        pool = None
        if q.materials:
            pool = []
            for token in q.materials:
                pool.extend(store.series(token))
            if not pool:
                raise UnknownMaterial(f"no records in the {q.materials[0]!r} series")
        filter = _range_filter(q.range)
        if filter:
            selection = query_records(store, filter)
            pool = [r for r in selection if pool is None or r in pool]
        try:
            value, witnesses = aggregate(store, prop, q.operation.type, records=pool)
        except EmptyStore:
            return QueryResult(kind="statistical", operation=q.operation.type, count=0)
        pool_size = len(pool) if pool is not None else len(store.records)
        rows = []
        for code in witnesses:
            record = store.get(code)
            if record is not None:
                rows.append({"ccdc_code": code, prop: _property_value(record, prop)})
        result = QueryResult(
            kind="statistical",
            rows=rows,
            properties=[prop],
            value=value,
            operation=q.operation.type,
            witnesses=list(witnesses),
            count=pool_size,
        )
        ctx.update_focus(q.materials, properties)
        ctx.snapshot_result(witnesses)
        return result

    raise ValueError(f"unhandled query type {q.query_type!r}")


# --- response composition ---------------------------------------------------

_ANSWER_NUM_RE = re.compile(r"(?<![\w.\-])-?\d+(?:\.\d+)?(?!\d)")


def _canon_number(token: str) -> str:
    try:
        return f"{float(token):g}"
    except ValueError:
        return token


def _result_numbers(obj, out: set[str]) -> set[str]:
    if isinstance(obj, bool):
        return out
    if isinstance(obj, (int, float)):
        out.add(f"{float(obj):g}")
    elif isinstance(obj, str):
        for m in _ANSWER_NUM_RE.finditer(obj):
            out.add(_canon_number(m.group(0)))
    elif isinstance(obj, dict):
        for value in obj.values():
            _result_numbers(value, out)
    elif isinstance(obj, (list, tuple)):
        for value in obj:
            _result_numbers(value, out)
    return out


def numbers_match(answer: str, result: QueryResult) -> bool:
    """Every number spoken in the answer must appear in the result."""
    allowed = _result_numbers(result.to_json(), set())
    for m in _ANSWER_NUM_RE.finditer(answer):
        if _canon_number(m.group(0)) not in allowed:
            return False
    return True


def _format_value(value: float) -> str:
    return f"{value:g}"


def _render_rows(rows: list[dict]) -> list[str]:
    lines = []
    for row in rows:
        label = row.get("material") or row.get("ccdc_code")
        pairs = [
            f"{key} = {_format_value(v)}"
            for key, v in row.items()
            if key not in ("material", "ccdc_code") and isinstance(v, (int, float))
        ]
        code = row.get("ccdc_code")
        suffix = f" [{code}]" if code and label != code else ""
        lines.append(f"{label}{suffix}: " + ("; ".join(pairs) if pairs else ""))
    return lines


def render_template(result: QueryResult) -> str:
    """Deterministic text rendering used as the safe fallback."""
    if result.message:
        return result.message
    if result.kind in ("property", "comparison"):
        if not result.rows:
            return "No materials matched."
        return "\n".join(_render_rows(result.rows))
    if result.kind in ("range", "paging"):
        if result.total == 0 or (result.kind == "paging" and not result.rows):
            return "No materials matched."
        lines = [f"Found {result.total} materials; showing {result.count}."]
        lines.extend("- " + line for line in _render_rows(result.rows))
        return "\n".join(lines)
    if result.kind == "statistical":
        if result.count == 0 or result.value is None:
            return "No materials matched."
        prop = result.properties[0] if result.properties else "value"
        label = {"mean": "Mean", "max": "Maximum", "min": "Minimum", "count": "Count"}[
            result.operation
        ]
        text = f"{label} of {prop} over {result.count} records: {_format_value(result.value)}"
        if result.witnesses:
            text += f" ({', '.join(result.witnesses)})"
        return text
    return "Done."


def compose_response(
    result: QueryResult,
    q: ParsedQuery,
    gateway=None,
    mode: str = "template",
    question: str = "",
) -> str:
    """Render the answer text. In llm mode the model only ever sees the
    strict JSON summary of the result, and its reply is rejected (with a
    template fallback) if it misquotes any number."""
    if mode == "llm" and gateway is not None:
        payload = f"Question: {question}\nResult: {json.dumps(result.to_json(), ensure_ascii=False)}"
        try:
            response = gateway.complete_json("compose_answer", payload, node="compose-response")
            answer = str(response.parsed_json["answer"])
            if numbers_match(answer, result):
                return answer
            log.warning("composed answer misquoted a number; using template")
        except (SchemaViolation, FixtureMissing, ProviderUnavailable) as exc:
            log.warning("composer unavailable, using template: %s", exc)
    return render_template(result)


class QuerySession:
    """One conversation: parser mode, session context, and store."""

    def __init__(
        self,
        store: Store,
        gateway=None,
        parser_mode: str = "rules_only",
        compose_mode: str = "template",
        capacity: int = 20,
    ):
        self.store = store
        self.gateway = gateway
        self.parser_mode = parser_mode
        self.compose_mode = compose_mode
        self.ctx = SessionContext(capacity=capacity)

    def ask(self, question: str) -> tuple[str, QueryResult, ParsedQuery]:
        parsed = parse_query(question, self.ctx, self.gateway, self.parser_mode)
        resolved = apply_context(parsed, self.ctx)
        result = execute(resolved, self.ctx, self.store)
        answer = compose_response(
            result, resolved, self.gateway, self.compose_mode, question=question
        )
        self.ctx.remember(question, resolved)
        return answer, result, resolved
