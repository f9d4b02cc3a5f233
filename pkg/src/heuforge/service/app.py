"""FastAPI application exposing the engine, metric, and problem tooling."""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..astmetric import normalize, similarity_matrix, source_tsed
from ..config import RunConfig, apply_overrides, from_dict
from ..engine import Engine
from ..engine.reports import build_reports, write_reports
from ..errors import (
    ConfigError,
    HeuforgeError,
    InvalidScale,
    MissingTelemetry,
    ParseError,
    ReplayMiss,
    TooLarge,
    TransportError,
)
from ..problems import (
    BASELINES,
    bpp_lower_bound,
    evaluate_instance,
    generate_instances,
    instance_set_to_json,
    oracle,
)
from ..problems.instances import default_scale
from ..problems.oracles import TSP_ORACLE_MAX_N
from .jobs import JobRegistry
from .models import (
    BaselineRow,
    BaselinesRequest,
    BaselinesResponse,
    GenerateRequest,
    ReportResponse,
    ResumeRequest,
    RunRequest,
    RunStatus,
    TsedMatrixRequest,
    TsedMatrixResponse,
    TsedRequest,
    TsedResponse,
)


def _http_error(exc: HeuforgeError) -> HTTPException:
    if isinstance(exc, (ConfigError, InvalidScale, ParseError, TooLarge)):
        return HTTPException(status_code=400, detail=str(exc))
    if isinstance(exc, (TransportError, ReplayMiss)):
        return HTTPException(status_code=502, detail=str(exc))
    if isinstance(exc, MissingTelemetry):
        return HTTPException(status_code=404, detail=str(exc))
    return HTTPException(status_code=500, detail=f"{type(exc).__name__}: {exc}")


def _job_status(job) -> RunStatus:
    return RunStatus(
        run_id=job.run_id,
        run_dir=str(job.run_dir),
        state=job.state,
        generations=job.generations,
        evaluations=job.evaluations,
        best_objective=job.best_objective,
        error=job.error,
    )


def create_app(runs_root: str | Path | None = None) -> FastAPI:
    root = Path(runs_root or os.environ.get("HEUFORGE_RUNS_DIR", "runs"))
    app = FastAPI(title="heuforge", version=__version__)
    registry = JobRegistry(root)
    app.state.registry = registry

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/tsed", response_model=TsedResponse)
    def tsed_endpoint(request: TsedRequest):
        try:
            return TsedResponse(score=source_tsed(request.source_a, request.source_b))
        except HeuforgeError as exc:
            raise _http_error(exc) from exc

    @app.post("/tsed/matrix", response_model=TsedMatrixResponse)
    def tsed_matrix(request: TsedMatrixRequest):
        try:
            for source in request.sources:
                normalize(source)
            matrix = similarity_matrix([[source] for source in request.sources])
        except HeuforgeError as exc:
            raise _http_error(exc) from exc
        return TsedMatrixResponse(matrix=matrix)

    @app.post("/instances/generate")
    def generate(request: GenerateRequest):
        try:
            scale = default_scale(request.problem, request.n, request.capacity)
            instances = generate_instances(request.problem, scale, request.count, request.seed)
        except HeuforgeError as exc:
            raise _http_error(exc) from exc
        return instance_set_to_json(request.problem, scale, request.seed, instances)

    @app.post("/baselines", response_model=BaselinesResponse)
    def baselines(request: BaselinesRequest):
        try:
            scale = default_scale(request.problem, request.n, request.capacity)
            instances = generate_instances(request.problem, scale, request.count, request.seed)
            policies = BASELINES[request.problem]
        except HeuforgeError as exc:
            raise _http_error(exc) from exc
        except KeyError as exc:
            raise HTTPException(status_code=400, detail=f"unknown problem {request.problem!r}") from exc

        reference = None
        reference_kind = None
        if request.problem == "bpp_online":
            reference = sum(bpp_lower_bound(inst) for inst in instances) / len(instances)
            reference_kind = "lower_bound"
        elif request.problem == "kp" or (request.problem == "tsp" and request.n <= TSP_ORACLE_MAX_N):
            try:
                reference = sum(oracle(request.problem, inst) for inst in instances) / len(instances)
                reference_kind = "optimal"
            except TooLarge as exc:
                raise _http_error(exc) from exc

        maximize = request.problem == "kp"
        rows = []
        for policy in policies:
            fn = policy.load()
            mean = sum(
                evaluate_instance(fn, request.problem, inst) for inst in instances
            ) / len(instances)
            gap = None
            if reference not in (None, 0.0):
                gap = (
                    (reference - mean) / reference if maximize else (mean - reference) / reference
                ) * 100.0
            rows.append(BaselineRow(name=policy.name, objective=mean, gap_percent=gap))
        return BaselinesResponse(
            problem=request.problem,
            scale=scale,
            count=request.count,
            seed=request.seed,
            reference=reference,
            reference_kind=reference_kind,
            rows=rows,
        )

    @app.post("/runs", response_model=RunStatus)
    def start_run(request: RunRequest):
        try:
            config = from_dict(request.config) if request.config else RunConfig().validate()
        except ConfigError as exc:
            raise _http_error(exc) from exc
        run_id, run_dir = registry.new_run_dir(request.run_dir)
        try:
            engine = Engine(config, run_dir)
        except HeuforgeError as exc:
            raise _http_error(exc) from exc
        job = registry.execute(run_id, run_dir, engine, wait=request.wait)
        if job.state == "failed" and job.error:
            status = 502 if job.error.startswith(("TransportError", "ReplayMiss")) else 500
            raise HTTPException(status_code=status, detail=job.error)
        return _job_status(job)

    @app.get("/runs/{run_id:path}/report", response_model=ReportResponse)
    def report(run_id: str):
        job = registry.get(run_id) or registry.from_disk(run_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id!r}")
        try:
            files = build_reports(job.run_dir)
            write_reports(job.run_dir)
        except MissingTelemetry as exc:
            raise _http_error(exc) from exc
        return ReportResponse(run_dir=str(job.run_dir), files=files)

    @app.get("/runs/{run_id:path}", response_model=RunStatus)
    def run_status(run_id: str):
        job = registry.get(run_id) or registry.from_disk(run_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id!r}")
        return _job_status(job)

    @app.post("/runs/resume", response_model=RunStatus)
    def resume_run(request: ResumeRequest):
        run_dir = Path(request.run_dir)
        if not run_dir.is_absolute():
            run_dir = registry.runs_root / run_dir
        if not (run_dir / "checkpoint.json").exists():
            raise HTTPException(status_code=404, detail=f"no checkpoint under {run_dir}")
        try:
            engine = Engine.resume(run_dir)
            apply_overrides(engine.config, request.overrides)
        except HeuforgeError as exc:
            raise _http_error(exc) from exc
        run_id, _ = registry.new_run_dir(str(run_dir))
        job = registry.execute(run_id, run_dir, engine, wait=request.wait)
        if job.state == "failed" and job.error:
            raise HTTPException(status_code=500, detail=job.error)
        return _job_status(job)

    return app
