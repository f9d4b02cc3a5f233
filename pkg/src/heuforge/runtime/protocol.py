"""Wire format between the supervisor and a guest harness.

One JSON object per line over the harness's stdin/stdout, UTF-8, compact
separators, no pretty-printing.  Request and response schemas:

    {"id": str, "code": str, "entry": str, "problem": str,
     "instances": [...], "timeout_ms": int}
    {"id": str, "ok": bool, "objectives": [num] | null,
     "error": {"kind": str, "message": str} | null}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

ERROR_KINDS = ("parse_error", "exec_error", "timeout", "protocol_error", "infeasible")


@dataclass(frozen=True)
class ExecutionRequest:
    id: str
    code: str
    entry: str
    problem: str
    instances: list[Any]  # JSON-ready instance objects
    timeout_ms: int


@dataclass(frozen=True)
class ExecutionError:
    kind: str
    message: str


@dataclass(frozen=True)
class ExecutionResult:
    id: str
    ok: bool
    objectives: Optional[list[float]] = None
    error: Optional[ExecutionError] = None

    def __post_init__(self):
        if self.ok == (self.error is not None):
            raise ValueError("exactly one of objectives/error must be present")


def failure(request_id: str, kind: str, message: str) -> ExecutionResult:
    if kind not in ERROR_KINDS:
        raise ValueError(f"unknown error kind {kind!r}")
    return ExecutionResult(id=request_id, ok=False, error=ExecutionError(kind, message))


def success(request_id: str, objectives: list[float]) -> ExecutionResult:
    return ExecutionResult(id=request_id, ok=True, objectives=list(objectives))


def _dump(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def encode_request(request: ExecutionRequest) -> str:
    return _dump(
        {
            "id": request.id,
            "code": request.code,
            "entry": request.entry,
            "problem": request.problem,
            "instances": request.instances,
            "timeout_ms": request.timeout_ms,
        }
    )


def decode_request(line: str) -> ExecutionRequest:
    obj = json.loads(line)
    return ExecutionRequest(
        id=str(obj["id"]),
        code=str(obj["code"]),
        entry=str(obj["entry"]),
        problem=str(obj["problem"]),
        instances=list(obj["instances"]),
        timeout_ms=int(obj["timeout_ms"]),
    )


def encode_result(result: ExecutionResult) -> str:
    return _dump(
        {
            "id": result.id,
            "ok": result.ok,
            "objectives": result.objectives,
            "error": (
                {"kind": result.error.kind, "message": result.error.message}
                if result.error is not None
                else None
            ),
        }
    )


def decode_result(line: str) -> ExecutionResult:
    obj = json.loads(line)
    error = obj.get("error")
    return ExecutionResult(
        id=str(obj["id"]),
        ok=bool(obj["ok"]),
        objectives=list(obj["objectives"]) if obj.get("objectives") is not None else None,
        error=ExecutionError(str(error["kind"]), str(error["message"])) if error else None,
    )
