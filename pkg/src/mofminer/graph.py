"""Directed state-graph orchestrator for the document pipeline.

Nodes declare a stage (1..3) and dependencies; the executor runs them
in dependency waves, passing each node a by-value snapshot of the
state and merging the appended artifacts back deterministically in
declaration order. A failing node records an error and skips only its
transitive dependents, so independent branches always complete.
"""

from __future__ import annotations

import copy
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

from .errors import CycleDetected, DuplicateNode, ExecutorPanic, UnknownDependency

_LIST_FIELDS = (
    "synthesis_paragraphs",
    "table_entries",
    "match_results",
    "abbreviations",
    "dossiers",
    "output_paths",
    "errors",
)


@dataclass
class PipelineState:
    doc_id: str
    source_text: str
    synthesis_paragraphs: list = field(default_factory=list)
    table_entries: list = field(default_factory=list)
    match_results: list = field(default_factory=list)
    abbreviations: list = field(default_factory=list)
    dossiers: list = field(default_factory=list)
    output_paths: list = field(default_factory=list)
    errors: list = field(default_factory=list)  # (node_name, error_kind, message)
    timings: dict = field(default_factory=dict)  # node_name -> seconds


NodeHandler = Callable[[PipelineState], PipelineState]


@dataclass(frozen=True)
class NodeSpec:
    name: str
    stage: int
    dependencies: tuple[str, ...]
    handler: NodeHandler

    def __post_init__(self):
        if self.stage not in (1, 2, 3):
            raise ValueError(f"stage must be 1..3, got {self.stage}")


@dataclass
class ProcessingGraph:
    nodes: dict[str, NodeSpec]
    order: list[str]  # a topological order
    waves: list[list[str]]  # dependency levels, declaration order within
    downstream: dict[str, set[str]]  # transitive dependents


def build_graph(specs: list[NodeSpec]) -> ProcessingGraph:
    """Validate the node set and precompute execution order."""
    nodes: dict[str, NodeSpec] = {}
    for spec in specs:
        if spec.name in nodes:
            raise DuplicateNode(f"node {spec.name!r} declared twice")
        nodes[spec.name] = spec
    for spec in specs:
        for dep in spec.dependencies:
            if dep not in nodes:
                raise UnknownDependency(f"{spec.name!r} depends on unknown {dep!r}")
            if nodes[dep].stage > spec.stage:
                raise UnknownDependency(
                    f"{spec.name!r} (stage {spec.stage}) cannot depend on "
                    f"{dep!r} (stage {nodes[dep].stage})"
                )

    # Kahn layering; within a wave nodes keep declaration order.
    remaining = {spec.name: set(spec.dependencies) for spec in specs}
    order: list[str] = []
    waves: list[list[str]] = []
    placed: set[str] = set()
    while remaining:
        wave = [spec.name for spec in specs if spec.name in remaining and remaining[spec.name] <= placed]
        if not wave:
            raise CycleDetected(f"cycle among {sorted(remaining)}")
        for name in wave:
            del remaining[name]
        placed.update(wave)
        order.extend(wave)
        waves.append(wave)

    downstream: dict[str, set[str]] = {name: set() for name in nodes}
    for name in reversed(order):
        for dep in nodes[name].dependencies:
            downstream[dep].add(name)
            downstream[dep].update(downstream[name])
    return ProcessingGraph(nodes=nodes, order=order, waves=waves, downstream=downstream)


def _merge(base: PipelineState, target: PipelineState, result: PipelineState, node: str) -> None:
    if result.doc_id != base.doc_id or result.source_text != base.source_text:
        raise ExecutorPanic(f"node {node!r} mutated the document identity")
    for name in _LIST_FIELDS:
        before = getattr(base, name)
        after = getattr(result, name)
        if after[: len(before)] != before:
            raise ExecutorPanic(f"node {node!r} rewrote {name} instead of appending")
        getattr(target, name).extend(after[len(before) :])
    for key, value in result.timings.items():
        target.timings.setdefault(key, value)


def execute(graph: ProcessingGraph, initial: PipelineState) -> PipelineState:
    """Run every node at most once; failures skip only their dependents."""
    state = copy.deepcopy(initial)
    skipped: set[str] = set()
    for wave in graph.waves:
        runnable = [n for n in wave if n not in skipped]
        if not runnable:
            continue
        base = copy.deepcopy(state)

        def run(name: str):
            snapshot = copy.deepcopy(base)
            started = time.perf_counter()
            try:
                result = graph.nodes[name].handler(snapshot)
                if not isinstance(result, PipelineState):
                    raise ExecutorPanic(f"node {name!r} returned {type(result).__name__}")
                return name, result, None, time.perf_counter() - started
            except ExecutorPanic:
                raise
            except Exception as exc:  # contained per-node failure
                return name, None, exc, time.perf_counter() - started

        if len(runnable) == 1:
            outcomes = [run(runnable[0])]
        else:
            with ThreadPoolExecutor(max_workers=len(runnable)) as pool:
                outcomes = list(pool.map(run, runnable))

        for name, result, exc, duration in outcomes:
            state.timings[name] = duration
            if exc is not None:
                state.errors.append((name, type(exc).__name__, str(exc)))
                skipped.update(graph.downstream[name])
            else:
                _merge(base, state, result, name)
    return state


@dataclass
class RunReport:
    doc_count: int
    succeeded: int
    failed: int
    per_doc: dict
    started_at: str = ""
    finished_at: str = ""

    def to_json(self) -> dict:
        return {
            "doc_count": self.doc_count,
            "succeeded": self.succeeded,
            "failed": self.failed,
            "per_doc": self.per_doc,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }


def _rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z")


def run_corpus(
    graph: ProcessingGraph,
    docs: list[tuple[str, str]],
    parallelism: int = 1,
) -> RunReport:
    """Run the graph over many documents; failures never abort the run."""
    if parallelism < 1:
        raise ValueError("parallelism must be positive")
    ids = [doc_id for doc_id, _ in docs]
    if len(set(ids)) != len(ids):
        raise ValueError("doc_ids must be unique within a run")
    started = _rfc3339()

    def run_one(item: tuple[str, str]):
        doc_id, text = item
        final = execute(graph, PipelineState(doc_id=doc_id, source_text=text))
        return doc_id, final

    if parallelism == 1 or len(docs) <= 1:
        results = [run_one(item) for item in docs]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(run_one, docs))

    per_doc = {}
    succeeded = 0
    for doc_id, final in results:
        ok = not final.errors
        succeeded += ok
        per_doc[doc_id] = {
            "status": "succeeded" if ok else "failed",
            "timings": dict(final.timings),
            "errors": [list(e) for e in final.errors],
        }
    return RunReport(
        doc_count=len(docs),
        succeeded=succeeded,
        failed=len(docs) - succeeded,
        per_doc=per_doc,
        started_at=started,
        finished_at=_rfc3339(),
    )
