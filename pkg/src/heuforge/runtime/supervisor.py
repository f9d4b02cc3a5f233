"""Supervisor for external guest harness processes.

Spawns the configured harness command once per batch, writes a single request
line, reads a single response line, and kills the process if the batch budget
elapses.  A harness that crashes, emits garbage, or answers with the wrong id
is reported as a protocol error.
"""

from __future__ import annotations

import json
import subprocess
import threading
import time

from .protocol import ExecutionRequest, ExecutionResult, decode_result, encode_request, failure

_GRACE_SECONDS = 0.5
_KILL_MARGIN_SECONDS = 0.15


class HarnessSupervisor:
    """Run batches via an external harness speaking the line protocol."""

    def __init__(self, command: list[str], memory_limit_bytes: int | None = 1 << 30):
        if not command:
            raise ValueError("harness command must be a non-empty argv list")
        self.command = list(command)
        self.memory_limit_bytes = memory_limit_bytes
        self._inflight: set[str] = set()
        self._lock = threading.Lock()

    def _preexec(self):
        if self.memory_limit_bytes is None:
            return None

        def set_limits():
            try:
                import resource

                resource.setrlimit(
                    resource.RLIMIT_AS, (self.memory_limit_bytes, self.memory_limit_bytes)
                )
            except Exception:
                pass  # limits are best-effort; the timeout still protects us

        return set_limits

    def execute_batch(self, request: ExecutionRequest) -> ExecutionResult:
        with self._lock:
            if request.id in self._inflight:
                raise ValueError(f"request id {request.id!r} already in flight")
            self._inflight.add(request.id)
        try:
            return self._run(request)
        finally:
            with self._lock:
                self._inflight.discard(request.id)

    def _run(self, request: ExecutionRequest) -> ExecutionResult:
        # the whole batch, harness startup included, must come back within
        # timeout_ms plus the grace window; reserve a slice for the kill
        started = time.monotonic()
        budget = request.timeout_ms / 1000.0 + _GRACE_SECONDS
        try:
            proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                encoding="utf-8",
                preexec_fn=self._preexec(),
            )
        except OSError as exc:
            return failure(request.id, "protocol_error", f"cannot start harness: {exc}")

        line = encode_request(request) + "\n"
        remaining = max(0.05, budget - (time.monotonic() - started) - _KILL_MARGIN_SECONDS)
        try:
            out, _ = proc.communicate(line, timeout=remaining)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()
            return failure(
                request.id, "timeout", f"harness produced no response within {request.timeout_ms} ms"
            )
        finally:
            if proc.poll() is None:
                proc.kill()
                proc.wait()

        response_line = out.splitlines()[0] if out and out.splitlines() else ""
        if not response_line:
            return failure(
                request.id,
                "protocol_error",
                f"harness exited with code {proc.returncode} without a response",
            )
        try:
            result = decode_result(response_line)
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            return failure(request.id, "protocol_error", f"unparseable harness response: {exc}")
        if result.id != request.id:
            return failure(
                request.id,
                "protocol_error",
                f"harness answered request {result.id!r}, expected {request.id!r}",
            )
        return result
