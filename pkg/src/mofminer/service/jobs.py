"""Asynchronous pipeline jobs with a bounded worker pool."""

from __future__ import annotations

import hashlib
import re
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..errors import MofminerError, NotInCorpus
from ..ingest import DocumentRecord, Provenance, make_document, route_doi
from ..pipeline import run_document
from .config import Runtime


def _safe_doc_id(raw: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", raw)


@dataclass
class Job:
    job_id: str
    status: str = "queued"  # queued | running | done | failed
    doc_id: str | None = None
    outputs: list[str] = field(default_factory=list)
    errors: list[tuple[str, str, str]] = field(default_factory=list)


class JobManager:
    def __init__(self, runtime: Runtime, workers: int | None = None):
        self.runtime = runtime
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=workers or runtime.config.workers)

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

    def submit(self, doi=None, ccdc_code=None, raw_text=None) -> Job:
        job = Job(job_id=uuid.uuid4().hex[:12])
        with self._lock:
            self._jobs[job.job_id] = job
        self._pool.submit(self._run, job, doi, ccdc_code, raw_text)
        return job

    def _resolve_document(self, doi, ccdc_code, raw_text) -> DocumentRecord:
        fetcher = self.runtime.fetcher
        if raw_text is not None:
            digest = hashlib.sha256(raw_text.encode("utf-8")).hexdigest()[:10]
            return make_document(
                f"upload-{digest}", raw_text, Provenance.USER_UPLOAD
            )
        if fetcher is None:
            raise NotInCorpus("no corpus manifest configured")
        if ccdc_code is not None:
            entry = fetcher.entry_for_ccdc(ccdc_code)
            if entry is None:
                raise NotInCorpus(f"no corpus document lists {ccdc_code}")
            payload, _ = fetcher.fetch(route_doi(entry.doi), entry.doi)
            return make_document(
                _safe_doc_id(entry.doi),
                payload.decode("utf-8"),
                Provenance.LOCAL_FILE,
                doi=entry.doi,
                ccdc_codes=[ccdc_code],
            )
        route = route_doi(doi)
        payload, _ = fetcher.fetch(route, doi)
        entry = fetcher.entries[doi]
        return make_document(
            _safe_doc_id(doi),
            payload.decode("utf-8"),
            Provenance.FETCHED,
            doi=doi,
            ccdc_codes=entry.ccdc_codes,
        )

    def _run(self, job: Job, doi, ccdc_code, raw_text) -> None:
        with self._lock:
            job.status = "running"
        try:
            doc = self._resolve_document(doi, ccdc_code, raw_text)
        except MofminerError as exc:
            with self._lock:
                job.status = "failed"
                job.errors.append(("ingest", type(exc).__name__, str(exc)))
            return
        state = run_document(self.runtime.pipeline_config, doc)
        with self._lock:
            job.doc_id = doc.doc_id
            job.outputs = list(state.output_paths)
            job.errors = list(state.errors)
            job.status = "failed" if state.errors else "done"
