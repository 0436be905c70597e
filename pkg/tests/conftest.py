import json
from pathlib import Path

import pytest

import replies
from mofminer.dataset import load_dataset
from mofminer.gateway import (
    CostLedger,
    Gateway,
    ReplayProvider,
    default_registry,
    fixture_key,
    render_prompt,
)
from mofminer.gateway.client import build_repair_messages, validation_error_of
from mofminer.ingest import Provenance, make_document

FIXTURES = Path(__file__).parent / "fixtures"
REGISTRY = default_registry()


def seed_reply(store: Path, template_name: str, payload: str, reply) -> list[dict]:
    """Record one reply under its content-addressed key; returns the
    rendered messages so callers can chain repair fixtures."""
    template = REGISTRY.get(template_name)
    messages = render_prompt(template, payload)
    text = reply if isinstance(reply, str) else json.dumps(reply, ensure_ascii=False)
    store.mkdir(parents=True, exist_ok=True)
    (store / fixture_key(messages)).write_text(text, encoding="utf-8")
    return messages


def seed_failing_reply(store: Path, template_name: str, payload: str, bad_reply: str):
    """Record an invalid reply for both the initial call and its repair
    retry, forcing a SchemaViolation."""
    template = REGISTRY.get(template_name)
    messages = seed_reply(store, template_name, payload, bad_reply)
    error = validation_error_of(template, bad_reply)
    assert error is not None, "seed_failing_reply requires an invalid reply"
    repair = build_repair_messages(messages, bad_reply, error)
    (store / fixture_key(repair)).write_text(bad_reply, encoding="utf-8")


def load_corpus_documents() -> dict:
    manifest = json.loads((FIXTURES / "corpus" / "manifest.json").read_text())
    docs = {}
    for i, row in enumerate(manifest, start=1):
        doc_id = f"doc{i}"
        raw = (FIXTURES / "corpus" / row["path"]).read_text(encoding="utf-8")
        docs[doc_id] = make_document(
            doc_id,
            raw,
            Provenance.LOCAL_FILE,
            doi=row["doi"],
            ccdc_codes=row["ccdc_codes"],
        )
    return docs


def seed_pipeline_replies(store: Path, docs: dict) -> None:
    seed_reply(store, "synthesis_parse", docs["doc1"].cleaned_text, replies.DOC1_SYNTHESIS)
    seed_reply(store, "table_parse", docs["doc1"].cleaned_text, replies.DOC1_TABLES)
    for paragraph, record in replies.DOC1_STRUCTURED.items():
        seed_reply(store, "structured_convert", paragraph, record)
    seed_reply(store, "synthesis_parse", docs["doc2"].cleaned_text, replies.DOC2_SYNTHESIS)
    seed_failing_reply(store, "table_parse", docs["doc2"].cleaned_text, replies.DOC2_TABLES_BAD)
    seed_reply(store, "synthesis_parse", docs["doc3"].cleaned_text, replies.DOC3_SYNTHESIS)
    seed_failing_reply(store, "table_parse", docs["doc3"].cleaned_text, replies.DOC3_TABLES_BAD)


def seed_query_replies(store: Path) -> None:
    for question, parsed in replies.QUERY_PARSES.items():
        seed_reply(store, "query_parse", question, parsed)
    seed_reply(store, "query_parse", replies.ZH_QUESTION, replies.ZH_PARSE)


@pytest.fixture(scope="session")
def corpus_docs():
    return load_corpus_documents()


@pytest.fixture(scope="session")
def replay_store(tmp_path_factory, corpus_docs) -> Path:
    store = tmp_path_factory.mktemp("replay-store")
    seed_pipeline_replies(store, corpus_docs)
    seed_query_replies(store)
    return store


def make_gateway(store: Path, with_ledger: bool = True) -> Gateway:
    ledger = CostLedger.from_config(FIXTURES / "price_table.json") if with_ledger else None
    return Gateway(provider=ReplayProvider(store), registry=REGISTRY, ledger=ledger)


@pytest.fixture
def gateway(replay_store) -> Gateway:
    return make_gateway(replay_store)


@pytest.fixture(scope="session")
def dataset_store():
    return load_dataset(FIXTURES / "dataset.jsonl")

