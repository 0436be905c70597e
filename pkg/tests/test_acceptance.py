"""Acceptance criteria, one test per criterion, at their stated
tolerances. Each prints a PASS line when its assertions hold."""

import json
import math
import random
import time
from collections import Counter
from decimal import Decimal
from pathlib import Path

import numpy as np
import pytest

import replies
from conftest import FIXTURES, make_gateway
from mofminer.pipeline import PipelineConfig, run_document, run_documents

GOLDEN = FIXTURES / "golden"


def ok(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


def test_metric_formulas():
    started = time.perf_counter()
    from mofminer.evalharness import Judgment, compute_metrics

    rng = random.Random(100)
    for _ in range(25):
        judgments = [
            Judgment(
                gold_present=rng.random() < 0.7,
                predicted_present=rng.random() < 0.7,
                equivalent=rng.random() < 0.8,
            )
            for _ in range(rng.randint(1, 200))
        ]
        tp = fp = fn = tn = 0
        for j in judgments:
            if j.predicted_present and j.gold_present and j.equivalent:
                tp += 1
            elif j.predicted_present:
                fp += 1
            elif j.gold_present:
                fn += 1
            else:
                tn += 1
        report = compute_metrics(judgments)
        assert (report.tp, report.fp, report.fn, report.tn) == (tp, fp, fn, tn)
        assert report.accuracy == ((tp + tn) / len(judgments) if judgments else 0.0)
        assert report.precision == (tp / (tp + fp) if tp + fp else 0.0)
        assert report.recall == (tp / (tp + fn) if tp + fn else 0.0)
        p, r = report.precision, report.recall
        assert report.f1 == (2 * p * r / (p + r) if p + r else 0.0)

    hand = compute_metrics(
        [Judgment(True, True, True)] * 9 + [Judgment(False, True)] + [Judgment(True, False)]
    )
    assert hand.precision == pytest.approx(0.9)
    assert hand.recall == pytest.approx(0.9)
    assert hand.f1 == pytest.approx(0.9)
    assert time.perf_counter() - started < 1.0
    ok("metric formulas")


def test_cosine_similarity():
    from mofminer.evalharness import cosine_similarity

    rng = np.random.default_rng(7)
    for _ in range(1000):
        a = rng.standard_normal(rng.integers(2, 32))
        b = rng.standard_normal(len(a))
        naive = float(
            sum(x * y for x, y in zip(a, b))
            / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b)))
        )
        assert abs(cosine_similarity(a, b) - naive) <= 1e-12
    assert cosine_similarity([1, 2, 3], [4, 5, 6]) == pytest.approx(0.9746, abs=1e-4)
    ok("cosine similarity")


def test_masked_mean_pooling():
    from mofminer.errors import ZeroMask
    from mofminer.evalharness import mean_pool_embedding

    single = mean_pool_embedding(np.array([[3.0, 4.0]]), [1.0])
    assert single == pytest.approx([0.6, 0.8])

    masked = mean_pool_embedding(np.array([[2.0, 0.0], [9.0, 9.0]]), [1.0, 0.0])
    assert masked == pytest.approx([1.0, 0.0])

    with pytest.raises(ZeroMask):
        mean_pool_embedding(np.ones((3, 4)), [0.0, 0.0, 0.0])
    ok("masked mean pooling")


def test_crystal_matcher():
    from test_crystal import cell, oracle_degree, oracle_match, perturbed, random_cell
    from mofminer.crystal import match
    from mofminer.errors import EmptyFormula, NoComparableFields

    rng = random.Random(7)
    queries = [random_cell(rng) for _ in range(20)]
    candidates = [perturbed(rng, random_cell(rng)) for _ in range(20)]
    for q in queries:
        for c in candidates:
            expected = oracle_match(q, c)
            if expected is None:
                with pytest.raises((NoComparableFields, EmptyFormula)):
                    match(q, c)
                continue
            result = match(q, c)
            assert (result.level, result.matched) == expected
            assert result.degree == pytest.approx(oracle_degree(q, c), abs=1e-12)

    matched = match(cell(a=9.8), cell())
    assert matched.matched and matched.degree == pytest.approx(0.95)
    q = cell(crystal_system="triclinic", elements={"Cu": 1, "C": 6, "H": 6, "O": 4})
    c = cell(elements={"Zn": 1, "C": 6, "H": 6, "O": 4})
    blocked = match(q, c)
    assert not blocked.matched and blocked.degree == pytest.approx(0.875)
    ok("crystal matcher")


def test_abbreviation_resolver():
    started = time.perf_counter()
    from test_abbrev import ABBRS, LIGANDS, METAL_NAMES_IN_TEXT, sentence_for
    from mofminer.abbrev import flatten_abbreviation, resolve
    from mofminer.chem import contains_metal

    rng = random.Random(42)
    sentences = []
    expected = []
    for i in range(200):
        pattern_id = (i % 15) + 1
        name = LIGANDS[i % len(LIGANDS)]
        abbr = ABBRS[i % len(ABBRS)]
        sentences.append(sentence_for(pattern_id, name, abbr))
        expected.append((flatten_abbreviation(abbr), name))
    for i in range(50):
        sentences.append(
            sentence_for((i % 15) + 1, METAL_NAMES_IN_TEXT[i % len(METAL_NAMES_IN_TEXT)], ABBRS[(i + 3) % len(ABBRS)])
        )
    rng.shuffle(sentences)

    confirmed = []
    for sentence in sentences:
        confirmed.extend(m for m in resolve(sentence) if m.confirmed)

    assert all(not contains_metal(m.full_name) for m in confirmed)  # 100% precision
    got = {(flatten_abbreviation(m.abbreviation), m.full_name) for m in confirmed}
    for pair in expected:  # 100% recall
        assert pair in got, pair
    assert time.perf_counter() - started < 5.0
    ok("abbreviation resolver")


def test_bm25_oracle():
    from mofminer.bm25 import Bm25Index, bm25_score

    rng = random.Random(11)
    vocabulary = [f"tok{i}" for i in range(40)]
    for _ in range(50):
        docs = [
            [rng.choice(vocabulary) for _ in range(rng.randint(1, 50))]
            for _ in range(rng.randint(1, 10))
        ]
        index = Bm25Index(docs)
        query = [rng.choice(vocabulary) for _ in range(rng.randint(1, 6))]
        avgdl = sum(len(d) for d in docs) / len(docs)
        for i, doc in enumerate(docs):
            tf = Counter(doc)
            naive = 0.0
            for t in query:
                f = tf[t]
                if f == 0:
                    continue
                df = sum(1 for d in docs if t in d)
                idf = math.log((len(docs) - df + 0.5) / (df + 0.5) + 1.0)
                naive += idf * f * 2.2 / (f + 1.2 * (1 - 0.75 + 0.75 * len(doc) / avgdl))
            assert abs(bm25_score(index, query, i) - naive) <= 1e-9
    ok("bm25")


def test_dual_threshold_filter():
    from mofminer.extract import CrystalTableEntry, KEY_PARAMETERS, dual_threshold_filter

    rng = random.Random(5)
    for _ in range(10_000):
        missing = rng.sample(KEY_PARAMETERS, rng.randint(0, 8))
        fields = dict(
            compound_name="x",
            crystal_system="cubic",
            space_group="Fm-3m",
            a=10.0,
            b=10.0,
            c=10.0,
            alpha=90.0,
            beta=90.0,
            gamma=90.0,
        )
        for name in missing:
            fields[name] = None
        entry = CrystalTableEntry(**fields)
        kept = bool(dual_threshold_filter([entry]))
        assert kept == (len(missing) <= 1)
    ok("dual-threshold filter")


GOLDEN_NAMES = [
    "final_output_doc1.txt",
    "identifier_ABAYUY.txt",
    "identifier_ABAYOX.txt",
    "identifier_ABAYIV.txt",
    "structure_ABAYUY.md",
    "structure_ABAYOX.md",
    "structure_ABAYIV.md",
]


def test_end_to_end_golden_run(tmp_path, replay_store, dataset_store, corpus_docs):
    for run in range(5):
        config = PipelineConfig(
            out_dir=tmp_path / f"run{run}",
            gateway=make_gateway(replay_store),
            store=dataset_store,
        )
        state = run_document(config, corpus_docs["doc1"])
        assert state.errors == []
        doc_dir = tmp_path / f"run{run}" / "doc1"
        for name in GOLDEN_NAMES:
            assert (doc_dir / name).read_bytes() == (GOLDEN / name).read_bytes(), name

    byte_maps = {}
    for parallelism in (1, 4):
        config = PipelineConfig(
            out_dir=tmp_path / f"par{parallelism}",
            gateway=make_gateway(replay_store),
            store=dataset_store,
        )
        run_documents(config, list(corpus_docs.values()), parallelism=parallelism)
        byte_maps[parallelism] = {
            str(p.relative_to(config.out_dir)): p.read_bytes()
            for p in sorted(Path(config.out_dir).rglob("*"))
            if p.is_file() and not p.name.startswith("split_report")
        }
    assert byte_maps[1] == byte_maps[4]
    ok("end-to-end golden run")


def test_query_engine_canonical(dataset_store, replay_store):
    from mofminer.dataset import query_records
    from mofminer.query import Operation, SessionContext, execute, parse_query
    from mofminer.query.rules import parse_rules

    gateway = make_gateway(replay_store)

    # Documented parse shapes.
    q = parse_rules("What is the PLD of MOF-5?")
    assert (q.query_type, q.materials, q.properties) == ("property", ["MOF-5"], ["PLD (Å)"])

    q = parse_rules("What about its density?")
    assert q.uses_context and q.properties == ["Density (g/cm3)"] and q.materials == []

    q = parse_rules("Find MOFs with PLD between 7.5 and 10 Å and LCD between 10 and 16 Å")
    assert q.range == {"min": {"PLD": 7.5, "LCD": 10}, "max": {"PLD": 10, "LCD": 16}}

    q = parse_rules(
        "Give me MOFs with PLD between 7.5-10 Å, LCD between 10-16 Å, and VSA between 2000-2400 m2/cm3"
    )
    assert q.range == {
        "min": {"PLD": 7.5, "LCD": 10, "VSA": 2000},
        "max": {"PLD": 10, "LCD": 16, "VSA": 2400},
    }

    q = parse_rules("Compare the density of VUJBEI and QOWTIG")
    assert q.query_type == "comparison" and q.materials == ["VUJBEI", "QOWTIG"]

    q = parse_rules("What is the average density of the MOF-5 series?")
    assert q.query_type == "statistical" and q.operation == Operation("mean", None)

    q = parse_rules("show 5 more")
    assert q.query_type == "paging" and q.page_size == 5

    # Dual-engine agreement on every canonical query.
    for question in replies.QUERY_PARSES:
        ctx = SessionContext()
        assert parse_query(question, ctx, gateway, "llm_primary") == parse_rules(question)

    # Paging concatenation equals the unpaged oracle.
    ctx = SessionContext()
    first = execute(
        parse_rules("Find MOFs with PLD between 7.5 and 10 Å and LCD between 10 and 16 Å"),
        ctx,
        dataset_store,
    )
    codes = [row["ccdc_code"] for row in first.rows]
    while True:
        page = execute(parse_rules("Show more results"), ctx, dataset_store)
        if not page.rows:
            break
        codes.extend(row["ccdc_code"] for row in page.rows)
    oracle = [r.ccdc_code for r in query_records(dataset_store, {"pld": (7.5, 10), "lcd": (10, 16)})]
    assert codes == oracle and len(codes) == len(set(codes))
    ok("query engine canonical set")


def test_dataset_store_oracles(tmp_path):
    from test_dataset import MINIMAL_CIF, record
    from mofminer.dataset import aggregate, emit_cif, parse_cif, query_records, viz_payload
    from mofminer.dataset.store import build_store

    rng = random.Random(13)
    records = [
        record(
            f"R{i:05d}",
            pld=rng.uniform(0, 12),
            lcd=rng.uniform(12, 25),
            density=rng.uniform(0.3, 3.0),
            vsa=rng.uniform(0, 2500),
        )
        for i in range(1000)
    ]
    store = build_store(records)

    for _ in range(20):
        lo, hi = sorted((rng.uniform(0, 12), rng.uniform(0, 12)))
        dlo, dhi = sorted((rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)))
        got = query_records(store, {"pld": (lo, hi), "density": (dlo, dhi)})
        oracle = sorted(
            (
                r
                for r in records
                if lo <= r.pore.pld <= hi and dlo <= r.pore.density <= dhi
            ),
            key=lambda r: r.ccdc_code,
        )
        assert got == oracle

    mean, _ = aggregate(store, "pld", "mean")
    assert mean == sum(r.pore.pld for r in records) / len(records)
    top, witnesses = aggregate(store, "vsa", "max")
    oracle_top = max(r.pore.vsa for r in records)
    assert top == oracle_top
    assert witnesses == sorted(r.ccdc_code for r in records if r.pore.vsa == oracle_top)
    count, _ = aggregate(store, "pld", "count", filter={"pld": (0.0, 2.0)})
    assert count == sum(1 for r in records if r.pore.pld <= 2.0)

    model = parse_cif(MINIMAL_CIF)
    assert parse_cif(emit_cif(model)) == model
    atom = viz_payload(model)["atoms"][0]
    assert (atom["x"], atom["y"], atom["z"]) == pytest.approx((5.0, 5.0, 5.0), abs=1e-9)
    ok("dataset store oracles")


def test_eval_rule_engine():
    from mofminer.evalharness import HashingEmbedder, cells_equivalent, preprocess_synthesis_text
    from mofminer.evalharness.rules import RuleVerdict

    verdict, _ = cells_equivalent("35%", "0.35")
    assert verdict.equivalent

    verdict, _ = cells_equivalent("0.25 mmol, 0.061 g", "0.061 g (0.25 mmol)")
    assert verdict.equivalent

    # Temperature/time normalization: both via preprocessing and at cell level.
    assert preprocess_synthesis_text("heated at 100 oC for 24 hours") == "heated at 100 C for 24h"
    assert preprocess_synthesis_text("heated at 100 °C for 24 h") == "heated at 100 C for 24h"
    verdict, _ = cells_equivalent("100 °C", "100 oC")
    assert verdict.equivalent
    verdict, _ = cells_equivalent("24 hours", "24h")
    assert verdict.equivalent

    rng = random.Random(17)
    vocabulary = [
        "35%", "0.35", "Yield: 62%", "62 %", "0.25 mmol, 0.061 g",
        "0.061 g (0.25 mmol)", "DMF (5 mL) and H2O (5 mL)", "10 mL",
        "5 mL + 5 mL (total 10 mL)", "Cu(NO3)2", "Zn(NO3)2",
        "Teflon lined autoclave", "beaker", "dimethylformamide (DMF)", "DMF",
        "colorless blocks", "120 C", "100 °C", "100 oC", "72h", "24 hours",
        "oven", "23 mL vial", "pale yellow plates",
    ]
    embedder = HashingEmbedder()
    for _ in range(1000):
        a, b = rng.choice(vocabulary), rng.choice(vocabulary)
        va, _ = cells_equivalent(a, b, embedder=embedder)
        vb, _ = cells_equivalent(b, a, embedder=embedder)
        assert isinstance(va, RuleVerdict)
        assert va.equivalent == vb.equivalent, (a, b)
    ok("eval rule engine")


def test_cost_ledger():
    from mofminer.gateway import CostLedger

    ledger = CostLedger.from_config(FIXTURES / "price_table.json")
    profile = json.loads((FIXTURES / "token_profile.json").read_text())
    for doc_index in range(100):
        for agent in profile["agents"]:
            ledger.add(
                f"doc{doc_index:03d}",
                agent["node"],
                agent["model"],
                agent["input_tokens"],
                agent["output_tokens"],
            )

    total = ledger.total()
    by_doc = sum(ledger.total_by_doc().values(), Decimal(0))
    by_node = sum(ledger.total_by_node().values(), Decimal(0))
    assert abs(total - by_doc) <= Decimal("1e-12")
    assert abs(total - by_node) <= Decimal("1e-12")
    assert total == by_doc == by_node  # Decimal arithmetic is exact
    assert Decimal("1") <= total <= Decimal("9.99")  # low single-digit USD band
    ok("cost ledger")
