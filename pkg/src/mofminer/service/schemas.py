"""Request/response models for the HTTP API."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, model_validator


class JobRequest(BaseModel):
    doi: str | None = None
    ccdc_code: str | None = None
    raw_text: str | None = None

    @model_validator(mode="after")
    def exactly_one_input(self):
        provided = [v for v in (self.doi, self.ccdc_code, self.raw_text) if v]
        if len(provided) != 1:
            raise ValueError("provide exactly one of doi, ccdc_code, raw_text")
        return self


class JobCreated(BaseModel):
    job_id: str


class JobStatus(BaseModel):
    job_id: str
    status: str  # queued | running | done | failed
    doc_id: str | None = None
    outputs: list[str] = []
    errors: list[list[str]] = []


class AskRequest(BaseModel):
    question: str


class AskResponse(BaseModel):
    answer_text: str
    structured_result: dict[str, Any] | None = None
    parsed_query: dict[str, Any] | None = None


class StatsResponse(BaseModel):
    property: str
    count: int
    mean: float
    min: float
    max: float
    histogram: list[dict[str, float]]


class EvalRequest(BaseModel):
    gold_path: str
    pred_dir: str


class HealthResponse(BaseModel):
    status: str
    dataset_records: int
