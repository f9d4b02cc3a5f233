"""In-engine executor: evaluates a candidate batch in a forked worker process.

Stands in for the external harness with identical semantics: same instance
schema, same error kinds, same timeout contract.  Each batch gets its own
worker so a crashing or hanging candidate can never touch a concurrent one.
"""

from __future__ import annotations

import multiprocessing as mp
import traceback

from ..errors import CandidateError
from ..problems.baselines import compile_policy
from ..problems.evaluators import evaluate_instance
from ..problems.instances import parse_instance
from .protocol import ExecutionRequest, ExecutionResult, failure, success

_GRACE_SECONDS = 0.5


def _run_batch(request: ExecutionRequest, conn) -> None:
    try:
        try:
            policy = compile_policy(request.code, request.entry)
        except SyntaxError as exc:
            conn.send(("parse_error", f"candidate does not parse: {exc}"))
            return
        except Exception as exc:
            conn.send(("exec_error", f"candidate failed to load: {exc!r}"))
            return
        objectives = []
        for obj in request.instances:
            instance = parse_instance(request.problem, obj)
            objectives.append(evaluate_instance(policy, request.problem, instance))
        conn.send(("ok", objectives))
    except CandidateError as exc:
        conn.send(("infeasible", str(exc)))
    except Exception:
        conn.send(("exec_error", traceback.format_exc(limit=4)))


class InEngineExecutor:
    """Evaluate candidates with the built-in problem drivers."""

    def __init__(self, context: str | None = None):
        if context is None:
            context = "fork" if "fork" in mp.get_all_start_methods() else "spawn"
        self._ctx = mp.get_context(context)

    def execute_batch(self, request: ExecutionRequest) -> ExecutionResult:
        parent_conn, child_conn = self._ctx.Pipe(duplex=False)
        proc = self._ctx.Process(target=_run_batch, args=(request, child_conn), daemon=True)
        proc.start()
        child_conn.close()

        payload = None
        if parent_conn.poll(request.timeout_ms / 1000.0):
            try:
                payload = parent_conn.recv()
            except EOFError:
                payload = None  # worker died before reporting
        timed_out = payload is None and proc.is_alive()

        if proc.is_alive():
            proc.terminate()
            proc.join(_GRACE_SECONDS)
            if proc.is_alive():
                proc.kill()
        proc.join()
        parent_conn.close()

        if payload is not None:
            kind, value = payload
            if kind == "ok":
                return success(request.id, value)
            return failure(request.id, kind, value)
        if timed_out:
            return failure(request.id, "timeout", f"no result within {request.timeout_ms} ms")
        return failure(
            request.id, "exec_error", f"worker exited with code {proc.exitcode} before reporting"
        )
