"""The request/response loop.

One JSON object per line in, one per line out, matching ids, in order.  A
malformed line still gets exactly one protocol_error response.  Candidate
modules are compiled once per code hash; a soft per-batch deadline (SIGALRM)
lets the harness answer ``timeout`` on its own before the supervisor's hard
kill lands.
"""

from __future__ import annotations

import hashlib
import json
import signal
import sys
import time
import traceback
from typing import Any, Optional

from .drivers import DRIVERS, InfeasibleMove

REQUIRED_FIELDS = ("id", "code", "entry", "problem", "instances", "timeout_ms")

INSTANCE_KEYS = {
    "tsp": ("coords",),
    "kp": ("values", "weights", "capacity"),
    "bpp_online": ("sizes", "capacity"),
}


class _SoftTimeout(Exception):
    pass


def _alarm_handler(signum, frame):
    raise _SoftTimeout()


class CandidateCache:
    """Fresh namespace per code hash; the namespace is reused afterwards."""

    def __init__(self, max_entries: int = 64):
        self.max_entries = max_entries
        self._entries: dict[str, dict[str, Any]] = {}

    def load(self, code: str) -> dict[str, Any]:
        key = hashlib.sha256(code.encode("utf-8")).hexdigest()
        namespace = self._entries.get(key)
        if namespace is None:
            namespace = {}
            exec(compile(code, "<candidate>", "exec"), namespace)
            if len(self._entries) >= self.max_entries:
                self._entries.pop(next(iter(self._entries)))
            self._entries[key] = namespace
        return namespace


def _error(request_id: str, kind: str, message: str) -> dict[str, Any]:
    return {"id": request_id, "ok": False, "objectives": None, "error": {"kind": kind, "message": message}}


def _ok(request_id: str, objectives: list[float]) -> dict[str, Any]:
    return {"id": request_id, "ok": True, "objectives": objectives, "error": None}


def handle_line(line: str, cache: CandidateCache, use_alarm: bool = True) -> dict[str, Any]:
    request_id = ""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        return _error(request_id, "protocol_error", f"request line is not JSON: {exc}")
    if not isinstance(obj, dict):
        return _error(request_id, "protocol_error", "request must be a JSON object")
    request_id = str(obj.get("id", ""))
    for field in REQUIRED_FIELDS:
        if field not in obj:
            return _error(request_id, "protocol_error", f"request misses field {field!r}")
    problem = obj["problem"]
    driver = DRIVERS.get(problem)
    if driver is None:
        return _error(request_id, "protocol_error", f"unknown problem tag {problem!r}")
    instances = obj["instances"]
    if not isinstance(instances, list):
        return _error(request_id, "protocol_error", "instances must be a list")
    try:
        timeout_ms = int(obj["timeout_ms"])
    except (TypeError, ValueError):
        return _error(request_id, "protocol_error", "timeout_ms must be an integer")

    try:
        namespace = cache.load(str(obj["code"]))
    except SyntaxError as exc:
        return _error(request_id, "parse_error", f"candidate does not parse: {exc}")
    except Exception as exc:
        return _error(request_id, "exec_error", f"candidate failed to load: {exc!r}")
    policy = namespace.get(str(obj["entry"]))
    if not callable(policy):
        return _error(request_id, "exec_error", f"no callable named {obj['entry']!r}")

    required_keys = INSTANCE_KEYS[problem]
    for instance in instances:
        if not isinstance(instance, dict) or any(key not in instance for key in required_keys):
            return _error(request_id, "protocol_error", f"malformed {problem} instance object")

    deadline = time.monotonic() + timeout_ms / 1000.0
    objectives: list[float] = []
    for instance in instances:
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            return _error(request_id, "timeout", "batch budget exhausted mid-instance")
        try:
            if use_alarm:
                signal.signal(signal.SIGALRM, _alarm_handler)
                signal.setitimer(signal.ITIMER_REAL, max(remaining, 0.001))
            try:
                objectives.append(float(driver(policy, instance)))
            finally:
                if use_alarm:
                    signal.setitimer(signal.ITIMER_REAL, 0.0)
        except _SoftTimeout:
            return _error(request_id, "timeout", "instance exceeded the batch budget")
        except InfeasibleMove as exc:
            return _error(request_id, "infeasible", str(exc))
        except Exception as exc:
            return _error(request_id, "exec_error", _trimmed_traceback(exc))
    return _ok(request_id, objectives)


def _trimmed_traceback(exc: Exception) -> str:
    lines = traceback.format_exception(type(exc), exc, exc.__traceback__, limit=3)
    return "".join(lines)[-1000:]


def serve(
    stdin=None,
    stdout=None,
    use_alarm: Optional[bool] = None,
) -> None:
    """Run until stdin closes; exactly one response line per request line."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    if use_alarm is None:
        use_alarm = hasattr(signal, "SIGALRM")
    cache = CandidateCache()
    for line in stdin:
        if not line.strip():
            continue
        try:
            response = handle_line(line, cache, use_alarm=use_alarm)
        except Exception as exc:  # the loop itself must never die
            print(f"harness internal error: {exc!r}", file=sys.stderr)
            response = _error("", "protocol_error", f"internal error: {exc!r}")
        stdout.write(json.dumps(response, separators=(",", ":"), ensure_ascii=False) + "\n")
        stdout.flush()
