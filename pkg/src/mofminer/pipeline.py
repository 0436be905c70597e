"""Wires the seven processing agents into the three-stage graph.

Stage 1: synthesis-parse ∥ table-parse
Stage 2: crystal-compare (after table-parse), abbrev-resolve (after
         synthesis-parse), post-process (after both branches)
Stage 3: result-generate (fusion), structured-convert

Per-document outputs land under <out_dir>/<doc_id>/ so parallel corpus
runs never collide.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import abbrev as abbrev_mod
from .assemble import (
    best_matches,
    generate_dossiers,
    join_by_label,
    merge_blocks,
    render_dossier,
    split_outputs,
    to_structured,
    write_report,
)
from .crystal import MatchConfig, MatchResult, canonicalize, match, match_result_to_json
from .dataset.store import Store
from .errors import EmptyFormula, NoComparableFields
from .extract import entry_to_json, parse_synthesis, parse_tables
from .gateway import Gateway
from .graph import NodeSpec, PipelineState, ProcessingGraph, RunReport, build_graph, execute, run_corpus
from .ingest import DocumentRecord, Provenance


@dataclass
class PipelineConfig:
    out_dir: Path
    gateway: Gateway
    store: Store | None = None
    abbrev_mode: str = "regex_only"
    match_config: MatchConfig = field(default_factory=MatchConfig)
    requested_codes: dict[str, list[str]] = field(default_factory=dict)

    def doc_dir(self, doc_id: str) -> Path:
        path = Path(self.out_dir) / doc_id
        path.mkdir(parents=True, exist_ok=True)
        return path


def _as_document(state: PipelineState) -> DocumentRecord:
    return DocumentRecord(
        doc_id=state.doc_id,
        raw_text=state.source_text,
        cleaned_text=state.source_text,
        provenance=Provenance.LOCAL_FILE,
    )


def _write_json(path: Path, payload) -> str:
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return str(path)


def _synthesis_node(config: PipelineConfig):
    def handler(state: PipelineState) -> PipelineState:
        paragraphs = parse_synthesis(_as_document(state), config.gateway)
        state.synthesis_paragraphs.extend(paragraphs)
        return state

    return handler


def _table_node(config: PipelineConfig):
    def handler(state: PipelineState) -> PipelineState:
        entries = parse_tables(_as_document(state), config.gateway)
        state.table_entries.extend(entries)
        path = config.doc_dir(state.doc_id) / f"tables_{state.doc_id}.json"
        state.output_paths.append(_write_json(path, [entry_to_json(e) for e in entries]))
        return state

    return handler


def _compare_node(config: PipelineConfig):
    def handler(state: PipelineState) -> PipelineState:
        store = config.store
        codes = config.requested_codes.get(state.doc_id) or []
        if store is None:
            candidates = []
        elif codes:
            candidates = []
            for code in codes:
                record = store.get(code)
                if record is None:
                    state.errors.append(
                        ("crystal-compare", "UnknownMaterial", f"{code} not in dataset")
                    )
                else:
                    candidates.append(record)
        else:
            candidates = list(store.records)
        keep_all = bool(codes)
        results: list[MatchResult] = []
        for entry in state.table_entries:
            query = canonicalize(entry)
            for record in candidates:
                try:
                    result = match(
                        query,
                        canonicalize(record),
                        query_id=entry.compound_name,
                        candidate_id=record.ccdc_code,
                        config=config.match_config,
                    )
                except (EmptyFormula, NoComparableFields):
                    result = MatchResult(
                        entry.compound_name, record.ccdc_code, "none", 0.0, False
                    )
                if keep_all or result.matched:
                    results.append(result)
        state.match_results.extend(results)
        path = config.doc_dir(state.doc_id) / f"comparison_{state.doc_id}.json"
        state.output_paths.append(
            _write_json(path, [match_result_to_json(r) for r in results])
        )
        return state

    return handler


def _abbrev_node(config: PipelineConfig):
    def handler(state: PipelineState) -> PipelineState:
        mappings = abbrev_mod.resolve(
            state.source_text,
            gateway=config.gateway,
            mode=config.abbrev_mode,
            doc_id=state.doc_id,
        )
        state.abbreviations.extend(mappings)
        path = config.doc_dir(state.doc_id) / f"acronym_results_{state.doc_id}.json"
        state.output_paths.append(
            _write_json(path, [abbrev_mod.mapping_to_json(m) for m in mappings])
        )
        return state

    return handler


def _post_node(config: PipelineConfig):
    def handler(state: PipelineState) -> PipelineState:
        blocks = []
        for code, result in best_matches(state.match_results).items():
            paragraph = join_by_label(state.synthesis_paragraphs, result.query_id)
            if paragraph is None:
                continue
            blocks.append(f"{code} compound {result.query_id}\n{paragraph.text}")
        doc_dir = config.doc_dir(state.doc_id)
        paths, report = split_outputs(merge_blocks(blocks), doc_dir)
        report_path = write_report(report, doc_dir / f"split_report_{state.doc_id}.json")
        state.output_paths.extend([str(p) for p in paths] + [str(report_path)])
        return state

    return handler


def _generate_node(config: PipelineConfig):
    def handler(state: PipelineState) -> PipelineState:
        records = {}
        if config.store is not None:
            for result in state.match_results:
                record = config.store.get(result.candidate_id)
                if record is not None:
                    records[result.candidate_id] = record
        dossiers, misses = generate_dossiers(state, config.gateway, records=records)
        for code in misses:
            state.errors.append(
                ("result-generate", "NoParagraphForCompound", f"no paragraph pairs with {code}")
            )
        state.dossiers.extend(dossiers)
        text = merge_blocks([render_dossier(d) for d in dossiers]) + "\n"
        path = config.doc_dir(state.doc_id) / f"final_output_{state.doc_id}.txt"
        path.write_text(text, encoding="utf-8")
        state.output_paths.append(str(path))
        return state

    return handler


def _structured_node(config: PipelineConfig):
    def handler(state: PipelineState) -> PipelineState:
        doc_dir = config.doc_dir(state.doc_id)
        for dossier in state.dossiers:
            _, markdown = to_structured(dossier, config.gateway)
            path = doc_dir / f"structure_{dossier.ccdc_code}.md"
            path.write_text(markdown, encoding="utf-8")
            state.output_paths.append(str(path))
        return state

    return handler


def build_pipeline(config: PipelineConfig) -> ProcessingGraph:
    specs = [
        NodeSpec("synthesis-parse", 1, (), _synthesis_node(config)),
        NodeSpec("table-parse", 1, (), _table_node(config)),
        NodeSpec("crystal-compare", 2, ("table-parse",), _compare_node(config)),
        NodeSpec("abbrev-resolve", 2, ("synthesis-parse",), _abbrev_node(config)),
        NodeSpec("post-process", 2, ("synthesis-parse", "crystal-compare"), _post_node(config)),
        NodeSpec(
            "result-generate",
            3,
            ("synthesis-parse", "crystal-compare", "abbrev-resolve"),
            _generate_node(config),
        ),
        NodeSpec("structured-convert", 3, ("result-generate",), _structured_node(config)),
    ]
    return build_graph(specs)


def run_document(config: PipelineConfig, doc: DocumentRecord) -> PipelineState:
    """Run one prepared document through the full graph."""
    config.requested_codes[doc.doc_id] = list(doc.ccdc_codes_requested)
    graph = build_pipeline(config)
    return execute(graph, PipelineState(doc_id=doc.doc_id, source_text=doc.cleaned_text))


def run_documents(
    config: PipelineConfig, docs: list[DocumentRecord], parallelism: int = 1
) -> RunReport:
    """Run many documents, `parallelism` at a time."""
    for doc in docs:
        config.requested_codes[doc.doc_id] = list(doc.ccdc_codes_requested)
    graph = build_pipeline(config)
    return run_corpus(graph, [(d.doc_id, d.cleaned_text) for d in docs], parallelism)
