"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class Tuning(BaseModel):
    """Per-request overrides; unset fields fall back to server defaults."""

    sample_count: int | None = Field(default=None, ge=1)
    max_rounds: int | None = Field(default=None, ge=1)
    temperature: float | None = Field(default=None, ge=0.0)
    target_length_ratio: float | None = Field(default=None, gt=0.0, le=1.0)
    floor: float | None = Field(default=None, gt=0.0, lt=1.0)
    wf_target: float | None = Field(default=None, gt=0.0, lt=1.0)
    wf_bands: int | None = Field(default=None, ge=1)


class RenderRequest(BaseModel):
    text: str
    method: Literal["gp", "ngp", "wf"] = "gp"
    format: Literal["html", "ansi", "json"] = "html"
    tuning: Tuning = Field(default_factory=Tuning)


class RenderResponse(BaseModel):
    output: str
    method: str
    format: str
    diagnostics: list[str]
    faded_fraction: float
    rounds_per_paragraph: list[int]


class CompareRequest(BaseModel):
    text: str
    tuning: Tuning = Field(default_factory=Tuning)


class CompareResponse(BaseModel):
    output: str
    diagnostics: list[str]


class CompressRequest(BaseModel):
    text: str
    mode: Literal["gp", "ngp"] = "gp"
    tuning: Tuning = Field(default_factory=Tuning)


class ScoreModel(BaseModel):
    semantic_fidelity: float
    length_score: float
    paraphrase_score: float
    grammar_score: float | None
    overall: float


class TraceModel(BaseModel):
    paragraph_index: int
    rounds: int
    levels: list[list[str]]
    per_round_scores: list[ScoreModel]
    diagnostic: str | None


class CompressResponse(BaseModel):
    traces: list[TraceModel]


class HealthResponse(BaseModel):
    status: str


class CacheStatsResponse(BaseModel):
    path: str
    entries: int
    size_bytes: int


class CacheProblem(BaseModel):
    line: int
    message: str


class CacheVerifyResponse(BaseModel):
    ok: bool
    problems: list[CacheProblem]
