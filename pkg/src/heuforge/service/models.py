"""Request/response schemas for the HTTP surface."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class TsedRequest(BaseModel):
    source_a: str
    source_b: str


class TsedResponse(BaseModel):
    score: float


class TsedMatrixRequest(BaseModel):
    sources: list[str] = Field(min_length=1)


class TsedMatrixResponse(BaseModel):
    matrix: list[list[float]]


class GenerateRequest(BaseModel):
    problem: str
    n: int
    capacity: Optional[float] = None
    count: int = 1
    seed: int = 0


class BaselineRow(BaseModel):
    name: str
    objective: float
    gap_percent: Optional[float] = None


class BaselinesRequest(BaseModel):
    problem: str
    n: int
    capacity: Optional[float] = None
    count: int = 100
    seed: int = 0


class BaselinesResponse(BaseModel):
    problem: str
    scale: dict[str, Any]
    count: int
    seed: int
    reference: Optional[float] = None
    reference_kind: Optional[str] = None  # optimal | lower_bound
    rows: list[BaselineRow]


class RunRequest(BaseModel):
    config: dict[str, Any] = Field(default_factory=dict)
    run_dir: Optional[str] = None
    wait: bool = True


class ResumeRequest(BaseModel):
    run_dir: str
    overrides: list[str] = Field(default_factory=list)
    wait: bool = True


class RunStatus(BaseModel):
    run_id: str
    run_dir: str
    state: str  # running | done | failed
    generations: int = 0
    evaluations: int = 0
    best_objective: Optional[float] = None
    error: Optional[str] = None


class ReportResponse(BaseModel):
    run_dir: str
    files: dict[str, str]
