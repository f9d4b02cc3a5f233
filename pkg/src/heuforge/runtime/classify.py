"""Map execution results to the fitness values the engine consumes."""

from __future__ import annotations

import math

from ..problems.evaluators import aggregate_fitness
from .protocol import ExecutionResult


def classify_failure(result: ExecutionResult) -> float:
    """Fitness sentinel for a failed execution: every error kind maps to +inf.

    The caller still reports the (strategy, reward=0) pair to the scheduler;
    this only decides the fitness side.
    """
    if result.ok:
        raise ValueError("classify_failure expects a failed result")
    return math.inf


def result_fitness(result: ExecutionResult, sense: str) -> float:
    """Scalar fitness under the minimize convention, +inf on any failure."""
    if not result.ok:
        return classify_failure(result)
    return aggregate_fitness(result.objectives or [], sense)
