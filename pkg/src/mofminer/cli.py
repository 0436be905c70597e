"""Command-line client.

Every subcommand talks to the HTTP API: either a remote server given
with --server, or an in-process instance built from the same
configuration flags, so the CLI and the service share one code path.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from .ingest import LocalCorpusFetcher, Provenance, fetch_document, make_document, route_doi
from .service import ApiConfig, create_app


def _config_options(func):
    options = [
        click.option("--out-dir", type=click.Path(path_type=Path), default=Path("./mofminer-out")),
        click.option("--corpus", "corpus_manifest", type=click.Path(path_type=Path), default=None),
        click.option("--dataset", "dataset_path", type=click.Path(path_type=Path), default=None),
        click.option("--fixtures", "fixture_store", type=click.Path(path_type=Path), default=None),
        click.option("--cif-dir", type=click.Path(path_type=Path), default=None),
        click.option("--price-table", type=click.Path(path_type=Path), default=None),
        click.option("--llm-mode", type=click.Choice(["replay", "record", "live"]), default="replay"),
        click.option("--parser-mode", type=click.Choice(["rules_only", "llm_primary"]), default="rules_only"),
        click.option("--compose-mode", type=click.Choice(["template", "llm"]), default="template"),
        click.option("--abbrev-mode", type=click.Choice(["regex_only", "regex_plus_llm"]), default="regex_only"),
        click.option("--live-base-url", default="http://localhost:11434/v1"),
        click.option("--workers", type=int, default=2),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _build_config(kwargs) -> ApiConfig:
    return ApiConfig(
        out_dir=kwargs.pop("out_dir"),
        corpus_manifest=kwargs.pop("corpus_manifest"),
        dataset_path=kwargs.pop("dataset_path"),
        fixture_store=kwargs.pop("fixture_store"),
        cif_dir=kwargs.pop("cif_dir"),
        price_table=kwargs.pop("price_table"),
        llm_mode=kwargs.pop("llm_mode"),
        parser_mode=kwargs.pop("parser_mode"),
        compose_mode=kwargs.pop("compose_mode"),
        abbrev_mode=kwargs.pop("abbrev_mode"),
        live_base_url=kwargs.pop("live_base_url"),
        workers=kwargs.pop("workers"),
    )


class _Client:
    """httpx against a remote server, or an in-process ASGI test client."""

    def __init__(self, server: str | None, config: ApiConfig | None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server.rstrip("/"), timeout=120.0)
        else:
            from fastapi.testclient import TestClient

            self._client = TestClient(create_app(config))

    def request(self, method: str, path: str, **kwargs):
        response = self._client.request(method, path, **kwargs)
        if response.status_code >= 400:
            click.echo(f"error {response.status_code}: {response.text}", err=True)
            sys.exit(1)
        return response


def _client_from(kwargs) -> _Client:
    server = kwargs.pop("server")
    config = _build_config(kwargs)
    return _Client(server, None if server else config)


_server_option = click.option("--server", default=None, help="URL of a running service; omit to run in-process.")


@click.group()
def main():
    """MOF literature mining and crystallographic Q&A."""


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@_config_options
def serve(host, port, **kwargs):
    """Run the HTTP service."""
    import uvicorn

    config = _build_config(kwargs)
    uvicorn.run(create_app(config), host=host, port=port)


@main.command()
@click.option("--doi", default=None)
@click.option("--file", "file_path", type=click.Path(path_type=Path), default=None)
@click.option("--corpus", "corpus_manifest", type=click.Path(path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
def ingest(doi, file_path, corpus_manifest, out_path):
    """Fetch (or read) a document and print its cleaned text."""
    if bool(doi) == bool(file_path):
        raise click.UsageError("provide exactly one of --doi or --file")
    if doi:
        if corpus_manifest is None:
            raise click.UsageError("--doi requires --corpus")
        fetcher = LocalCorpusFetcher(corpus_manifest)
        payload, _ = fetch_document(route_doi(doi), doi, {"corpus": fetcher})
        doc = make_document(doi, payload.decode("utf-8"), Provenance.FETCHED, doi=doi)
    else:
        doc = make_document(
            file_path.stem, file_path.read_text(encoding="utf-8"), Provenance.LOCAL_FILE
        )
    if out_path:
        out_path.write_text(doc.cleaned_text + "\n", encoding="utf-8")
        click.echo(str(out_path))
    else:
        click.echo(doc.cleaned_text)


@main.group()
def pipeline():
    """Pipeline jobs."""


@pipeline.command("run")
@click.option("--doi", default=None)
@click.option("--ccdc", "ccdc_code", default=None)
@click.option("--file", "file_path", type=click.Path(path_type=Path), default=None)
@click.option("--poll-interval", type=float, default=0.2)
@_server_option
@_config_options
def pipeline_run(doi, ccdc_code, file_path, poll_interval, **kwargs):
    """Submit a job and wait for it to finish."""
    client = _client_from(kwargs)
    body = {}
    if doi:
        body["doi"] = doi
    if ccdc_code:
        body["ccdc_code"] = ccdc_code
    if file_path:
        body["raw_text"] = Path(file_path).read_text(encoding="utf-8")
    created = client.request("POST", "/jobs", json=body).json()
    job_id = created["job_id"]
    while True:
        status = client.request("GET", f"/jobs/{job_id}").json()
        if status["status"] in ("done", "failed"):
            break
        time.sleep(poll_interval)
    click.echo(json.dumps(status, indent=2))
    if status["status"] == "failed":
        sys.exit(1)


@main.command()
@click.argument("question")
@click.option("--session", "session_id", default="cli")
@_server_option
@_config_options
def ask(question, session_id, **kwargs):
    """Ask the Q&A engine one question."""
    client = _client_from(kwargs)
    response = client.request("POST", f"/sessions/{session_id}/ask", json={"question": question})
    payload = response.json()
    click.echo(payload["answer_text"])


@main.group()
def cif():
    """CIF retrieval."""


@cif.command("get")
@click.argument("ccdc_code")
@click.option("--viz", is_flag=True, help="Fetch the 3D payload instead of the file.")
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
@_server_option
@_config_options
def cif_get(ccdc_code, viz, out_path, **kwargs):
    """Download a CIF file or its visualization payload."""
    client = _client_from(kwargs)
    path = f"/cif/{ccdc_code}/viz" if viz else f"/cif/{ccdc_code}"
    response = client.request("GET", path)
    content = json.dumps(response.json(), indent=2) if viz else response.text
    if out_path:
        Path(out_path).write_text(content, encoding="utf-8")
        click.echo(str(out_path))
    else:
        click.echo(content)


@main.group(name="eval")
def eval_group():
    """Extraction-quality evaluation."""


@eval_group.command("run")
@click.option("--gold", required=True, type=click.Path(path_type=Path))
@click.option("--pred", required=True, type=click.Path(path_type=Path))
@click.option("--report", "report_path", type=click.Path(path_type=Path), default=None)
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None)
@_server_option
@_config_options
def eval_run(gold, pred, report_path, csv_path, **kwargs):
    """Score predictions in PRED against the GOLD JSONL file."""
    client = _client_from(kwargs)
    summary = client.request(
        "POST", "/eval", json={"gold_path": str(gold), "pred_dir": str(pred)}
    ).json()
    if report_path or csv_path:
        from .evalharness.runner import write_reports

        write_reports(summary, report_path or Path("eval_report.json"), csv_path)
    cells = summary["cells"]
    click.echo(
        f"cells: tp={cells['tp']} fp={cells['fp']} fn={cells['fn']} tn={cells['tn']} "
        f"accuracy={cells['accuracy']:.4f} precision={cells['precision']:.4f} "
        f"recall={cells['recall']:.4f} f1={cells['f1']:.4f}"
    )
    if summary.get("sentence_mean_similarity") is not None:
        click.echo(f"sentence mean similarity: {summary['sentence_mean_similarity']:.4f}")


@main.command()
@click.argument("property_name")
@click.option("--bin-width", type=float, default=2.0)
@_server_option
@_config_options
def stats(property_name, bin_width, **kwargs):
    """Corpus statistics for one numeric property."""
    client = _client_from(kwargs)
    response = client.request("GET", f"/stats/{property_name}", params={"bin_width": bin_width})
    click.echo(json.dumps(response.json(), indent=2))


if __name__ == "__main__":
    main()
