import pytest

from mofminer.errors import CycleDetected, DuplicateNode, ExecutorPanic, UnknownDependency
from mofminer.graph import NodeSpec, PipelineState, build_graph, execute, run_corpus


def appender(name):
    def handler(state: PipelineState) -> PipelineState:
        state.output_paths.append(name)
        return state

    return handler


def failer(message="deliberate failure"):
    def handler(state: PipelineState) -> PipelineState:
        raise ValueError(message)

    return handler


def seven_node_specs():
    return [
        NodeSpec("synthesis-parse", 1, (), appender("synthesis-parse")),
        NodeSpec("table-parse", 1, (), appender("table-parse")),
        NodeSpec("crystal-compare", 2, ("table-parse",), appender("crystal-compare")),
        NodeSpec("abbrev-resolve", 2, ("synthesis-parse",), appender("abbrev-resolve")),
        NodeSpec("post-process", 2, ("synthesis-parse", "crystal-compare"), appender("post-process")),
        NodeSpec(
            "result-generate",
            3,
            ("synthesis-parse", "crystal-compare", "abbrev-resolve"),
            appender("result-generate"),
        ),
        NodeSpec("structured-convert", 3, ("result-generate",), appender("structured-convert")),
    ]


class TestBuildGraph:
    def test_seven_node_layout(self):
        graph = build_graph(seven_node_specs())
        assert set(graph.waves[0]) == {"synthesis-parse", "table-parse"}
        order = graph.order
        assert order.index("table-parse") < order.index("crystal-compare")
        assert order.index("result-generate") < order.index("structured-convert")

    def test_empty_graph(self):
        graph = build_graph([])
        state = PipelineState(doc_id="d", source_text="t")
        assert execute(graph, state) == state

    def test_cycle_detected(self):
        specs = [
            NodeSpec("A", 1, ("B",), appender("A")),
            NodeSpec("B", 1, ("A",), appender("B")),
        ]
        with pytest.raises(CycleDetected):
            build_graph(specs)

    def test_unknown_dependency(self):
        with pytest.raises(UnknownDependency):
            build_graph([NodeSpec("A", 1, ("ghost",), appender("A"))])

    def test_duplicate_node(self):
        specs = [NodeSpec("A", 1, (), appender("A")), NodeSpec("A", 1, (), appender("A"))]
        with pytest.raises(DuplicateNode):
            build_graph(specs)

    def test_stage_ordering_enforced(self):
        specs = [
            NodeSpec("late", 3, (), appender("late")),
            NodeSpec("early", 1, ("late",), appender("early")),
        ]
        with pytest.raises(UnknownDependency):
            build_graph(specs)


class TestExecute:
    def test_all_nodes_run_once(self):
        graph = build_graph(seven_node_specs())
        final = execute(graph, PipelineState(doc_id="d", source_text="t"))
        assert sorted(final.output_paths) == sorted(n.name for n in seven_node_specs())
        assert len(final.timings) == 7
        assert not final.errors

    def test_failure_skips_only_downstream(self):
        specs = seven_node_specs()
        specs[1] = NodeSpec("table-parse", 1, (), failer("no tables"))
        graph = build_graph(specs)
        final = execute(graph, PipelineState(doc_id="d", source_text="t"))
        assert len(final.errors) == 1
        node, kind, message = final.errors[0]
        assert node == "table-parse" and kind == "ValueError"
        ran = set(final.output_paths)
        assert {"synthesis-parse", "abbrev-resolve"} <= ran
        assert not {"crystal-compare", "post-process", "result-generate", "structured-convert"} & ran

    def test_topological_execution_order(self):
        order = []

        def tracker(name):
            def handler(state):
                order.append(name)
                return state

            return handler

        specs = [
            NodeSpec(s.name, s.stage, s.dependencies, tracker(s.name))
            for s in seven_node_specs()
        ]
        execute(build_graph(specs), PipelineState(doc_id="d", source_text="t"))
        position = {name: i for i, name in enumerate(order)}
        for spec in specs:
            for dep in spec.dependencies:
                assert position[dep] < position[spec.name]

    def test_state_passed_by_value(self):
        initial = PipelineState(doc_id="d", source_text="t")
        graph = build_graph([NodeSpec("A", 1, (), appender("A"))])
        final = execute(graph, initial)
        assert initial.output_paths == []
        assert final.output_paths == ["A"]

    def test_error_entries_name_existing_nodes(self):
        specs = seven_node_specs()
        specs[0] = NodeSpec("synthesis-parse", 1, (), failer())
        graph = build_graph(specs)
        final = execute(graph, PipelineState(doc_id="d", source_text="t"))
        for node, _, _ in final.errors:
            assert node in graph.nodes

    def test_executor_panic_on_identity_mutation(self):
        def mutator(state):
            state.doc_id = "changed"
            return state

        graph = build_graph([NodeSpec("A", 1, (), mutator)])
        with pytest.raises(ExecutorPanic):
            execute(graph, PipelineState(doc_id="d", source_text="t"))

    def test_executor_panic_on_list_rewrite(self):
        def rewriter(state):
            state.output_paths = ["hijacked"]
            return state

        graph = build_graph(
            [NodeSpec("A", 1, (), appender("A")), NodeSpec("B", 2, ("A",), rewriter)]
        )
        with pytest.raises(ExecutorPanic):
            execute(graph, PipelineState(doc_id="d", source_text="t"))

    def test_parallel_wave_merge_is_declaration_ordered(self):
        specs = [
            NodeSpec("zeta", 1, (), appender("zeta")),
            NodeSpec("alpha", 1, (), appender("alpha")),
        ]
        finals = {
            tuple(execute(build_graph(specs), PipelineState(doc_id="d", source_text="t")).output_paths)
            for _ in range(10)
        }
        assert finals == {("zeta", "alpha")}


class TestRunCorpus:
    def test_counts_consistent(self):
        graph = build_graph(seven_node_specs())
        report = run_corpus(graph, [("a", "x"), ("b", "y")], parallelism=2)
        assert report.doc_count == 2
        assert report.succeeded + report.failed == report.doc_count
        assert set(report.per_doc) == {"a", "b"}

    def test_zero_docs(self):
        graph = build_graph(seven_node_specs())
        report = run_corpus(graph, [], parallelism=1)
        assert report.doc_count == 0 and report.succeeded == 0 and report.failed == 0

    def test_failing_doc_counted_failed(self):
        specs = seven_node_specs()
        specs[2] = NodeSpec("crystal-compare", 2, ("table-parse",), failer("stage 2 boom"))
        graph = build_graph(specs)
        report = run_corpus(graph, [("a", "x")], parallelism=1)
        assert report.succeeded == 0 and report.failed == 1
        assert report.per_doc["a"]["status"] == "failed"

    def test_parallelism_equivalent_to_sequential(self):
        graph = build_graph(seven_node_specs())
        docs = [("a", "x"), ("b", "y"), ("c", "z")]
        seq = run_corpus(graph, docs, parallelism=1)
        par = run_corpus(graph, docs, parallelism=3)
        strip = lambda report: {
            doc: {"status": row["status"], "errors": row["errors"]}
            for doc, row in report.per_doc.items()
        }
        assert strip(seq) == strip(par)

    def test_duplicate_doc_ids_rejected(self):
        graph = build_graph(seven_node_specs())
        with pytest.raises(ValueError):
            run_corpus(graph, [("a", "x"), ("a", "y")])

    def test_report_json_shape(self):
        graph = build_graph(seven_node_specs())
        payload = run_corpus(graph, [("a", "x")]).to_json()
        assert set(payload) == {
            "doc_count",
            "succeeded",
            "failed",
            "per_doc",
            "started_at",
            "finished_at",
        }
        assert payload["started_at"].endswith("Z")
