"""HTTP facade over the pipeline, dataset and evaluation stack."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from pydantic import ValidationError

from ..dataset import aggregate, histogram, parse_cif, viz_payload
from ..errors import ContextUnavailable, EmptyStore, UnknownMaterial, UnknownProperty
from ..evalharness import evaluate_directory
from .config import ApiConfig, Runtime
from .jobs import JobManager
from .schemas import (
    AskRequest,
    AskResponse,
    EvalRequest,
    HealthResponse,
    JobCreated,
    JobRequest,
    JobStatus,
    StatsResponse,
)


def create_app(config: ApiConfig) -> FastAPI:
    runtime = Runtime(config)
    jobs = JobManager(runtime)
    app = FastAPI(title="mofminer", version="0.1.0")
    app.state.runtime = runtime

    def _store():
        if runtime.store is None:
            raise HTTPException(status_code=503, detail="no dataset configured")
        return runtime.store

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(
            status="ok",
            dataset_records=len(runtime.store) if runtime.store else 0,
        )

    @app.post("/jobs", response_model=JobCreated, status_code=201)
    def submit_job(payload: dict):
        try:
            request = JobRequest.model_validate(payload)
        except ValidationError as exc:
            raise HTTPException(status_code=400, detail=str(exc.errors()[0]["msg"]))
        job = jobs.submit(
            doi=request.doi, ccdc_code=request.ccdc_code, raw_text=request.raw_text
        )
        return JobCreated(job_id=job.job_id)

    def _job(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id}")
        return job

    @app.get("/jobs/{job_id}", response_model=JobStatus)
    def job_status(job_id: str):
        job = _job(job_id)
        return JobStatus(
            job_id=job.job_id,
            status=job.status,
            doc_id=job.doc_id,
            outputs=list(job.outputs),
            errors=[list(e) for e in job.errors],
        )

    @app.get("/jobs/{job_id}/outputs/{filename}")
    def job_output(job_id: str, filename: str):
        job = _job(job_id)
        for path_str in job.outputs:
            path = Path(path_str)
            if path.name == filename and path.is_file():
                media = "application/json" if path.suffix == ".json" else "text/plain"
                return Response(content=path.read_bytes(), media_type=media)
        raise HTTPException(status_code=404, detail=f"job {job_id} has no output {filename}")

    @app.post("/sessions/{session_id}/ask", response_model=AskResponse)
    def ask(session_id: str, request: AskRequest):
        _store()
        session, lock = runtime.session(session_id)
        with lock:
            try:
                answer, result, parsed = session.ask(request.question)
            except ContextUnavailable:
                raise HTTPException(
                    status_code=422,
                    detail="Which material are you referring to? The session has no earlier material.",
                )
            except (UnknownMaterial, UnknownProperty) as exc:
                return AskResponse(
                    answer_text=f"Sorry, {exc}.",
                    structured_result=None,
                    parsed_query=None,
                )
        return AskResponse(
            answer_text=answer,
            structured_result=result.to_json(),
            parsed_query=parsed.to_json(),
        )

    def _cif_path(ccdc_code: str) -> Path:
        if runtime.config.cif_dir is None:
            raise HTTPException(status_code=503, detail="no CIF store configured")
        path = Path(runtime.config.cif_dir) / f"{ccdc_code.upper()}.cif"
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"no CIF for {ccdc_code}")
        return path

    @app.get("/cif/{ccdc_code}")
    def cif_bytes(ccdc_code: str):
        return Response(
            content=_cif_path(ccdc_code).read_bytes(),
            media_type="chemical/x-cif",
        )

    @app.get("/cif/{ccdc_code}/viz")
    def cif_viz(ccdc_code: str):
        model = parse_cif(_cif_path(ccdc_code).read_bytes())
        payload = viz_payload(model)
        payload["ccdc_code"] = ccdc_code.upper()
        return payload

    @app.get("/stats/{property_name}", response_model=StatsResponse)
    def stats(property_name: str, bin_width: float = 2.0):
        store = _store()
        try:
            mean, _ = aggregate(store, property_name, "mean")
            low, _ = aggregate(store, property_name, "min")
            high, _ = aggregate(store, property_name, "max")
            bins = histogram(store, property_name, bin_width)
        except UnknownProperty as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except EmptyStore as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return StatsResponse(
            property=property_name,
            count=len(store),
            mean=mean,
            min=low,
            max=high,
            histogram=bins,
        )

    @app.post("/eval")
    def run_eval(request: EvalRequest):
        gold = Path(request.gold_path)
        pred = Path(request.pred_dir)
        if not gold.is_file() or not pred.is_dir():
            raise HTTPException(status_code=400, detail="gold_path or pred_dir missing")
        return evaluate_directory(gold, pred)

    @app.get("/schema")
    def schemas():
        return {
            model.__name__: model.model_json_schema()
            for model in (
                JobRequest,
                JobCreated,
                JobStatus,
                AskRequest,
                AskResponse,
                StatsResponse,
                EvalRequest,
                HealthResponse,
            )
        }

    return app
