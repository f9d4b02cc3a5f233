"""Fitness evaluation of candidate source against the training batch."""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from ..problems.evaluators import PROBLEM_SENSE
from ..problems.instances import Instance, instance_to_json
from ..runtime import ExecutionRequest, ExecutionResult, result_fitness


class CandidateEvaluator:
    """Maps candidate source to a scalar fitness via an executor.

    Fitness follows the minimize convention; any execution failure is the
    +inf sentinel.  ``evaluate_many`` fans a batch of candidates out over a
    small thread pool (each batch is its own worker process underneath).
    """

    def __init__(
        self,
        executor,
        problem: str,
        instances: Sequence[Instance],
        timeout_ms: int = 30000,
        max_parallel: int = 4,
    ):
        self.executor = executor
        self.problem = problem
        self.sense = PROBLEM_SENSE[problem]
        self.instances_json = [instance_to_json(inst) for inst in instances]
        self.timeout_ms = timeout_ms
        self.max_parallel = max(1, max_parallel)
        self.batches_run = 0
        self._lock = threading.Lock()
        self._next_id = 0

    def _request(self, code: str, entry: str) -> ExecutionRequest:
        with self._lock:
            self._next_id += 1
            rid = f"batch-{self._next_id}"
        return ExecutionRequest(
            id=rid,
            code=code,
            entry=entry,
            problem=self.problem,
            instances=self.instances_json,
            timeout_ms=self.timeout_ms,
        )

    def evaluate(self, code: str, entry: str) -> tuple[float, ExecutionResult]:
        result = self.executor.execute_batch(self._request(code, entry))
        with self._lock:
            self.batches_run += 1
        return result_fitness(result, self.sense), result

    def evaluate_many(self, codes: list[str], entry: str) -> list[float]:
        if not codes:
            return []
        if len(codes) == 1 or self.max_parallel == 1:
            return [self.evaluate(code, entry)[0] for code in codes]
        with ThreadPoolExecutor(max_workers=min(self.max_parallel, len(codes))) as pool:
            return [
                fitness
                for fitness, _ in pool.map(lambda c: self.evaluate(c, entry), codes)
            ]

    def make_tuner_evaluator(self, entry: str):
        def evaluate_many(codes: list[str]) -> list[float]:
            return self.evaluate_many(codes, entry)

        return evaluate_many


class NullResult:
    """Placeholder for paths that never executed a batch."""

    ok = False
    error = None
