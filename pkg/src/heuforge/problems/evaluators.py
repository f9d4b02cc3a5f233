"""Constructive evaluation loops that drive a candidate policy over instances.

The drivers enforce feasibility on every step; a policy that returns an
illegal move, a malformed value, or raises is reported as a
:class:`CandidateError` and the candidate gets the worst-possible fitness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import CandidateError
from .instances import BppStream, Instance, KpInstance, TspInstance

MINIMIZE = "minimize"
MAXIMIZE = "maximize"

PROBLEM_SENSE = {"tsp": MINIMIZE, "kp": MAXIMIZE, "bpp_online": MINIMIZE}


@dataclass
class Failure:
    kind: str
    message: str


@dataclass
class FitnessReport:
    """Per-instance objectives plus the scalar fitness the engine minimizes."""

    per_instance: list[float]
    sense: str
    failure: Optional[Failure] = None

    @property
    def mean(self) -> float:
        if self.failure is not None or not self.per_instance:
            return math.inf
        return sum(self.per_instance) / len(self.per_instance)

    @property
    def fitness(self) -> float:
        return aggregate_fitness(self.per_instance, self.sense, self.failure)


def aggregate_fitness(
    per_instance: Sequence[float], sense: str, failure: Optional[Failure] = None
) -> float:
    """Collapse per-instance objectives into the engine's minimize convention.

    Maximization problems contribute the negated mean so lower is always
    better; any failure maps to the +inf sentinel.
    """
    if failure is not None or not per_instance:
        return math.inf
    mean = sum(per_instance) / len(per_instance)
    if any(not math.isfinite(v) for v in per_instance):
        return math.inf
    return -mean if sense == MAXIMIZE else mean


def evaluate_tsp_constructive(
    policy: Callable, instance: TspInstance, start: int = 0
) -> float:
    """Length of the closed tour built by repeatedly asking ``policy`` for the
    next node. Every node is visited exactly once by construction."""
    n = instance.n
    if n == 1:
        return 0.0
    dist = instance.dist
    unvisited = set(range(n))
    unvisited.discard(start)
    current = start
    total = 0.0
    while unvisited:
        try:
            chosen = policy(current, start, set(unvisited), dist)
        except Exception as exc:
            raise CandidateError(f"policy raised: {exc!r}") from exc
        try:
            nxt = int(chosen)
        except (TypeError, ValueError):
            raise CandidateError(f"policy returned a non-node: {chosen!r}") from None
        if nxt not in unvisited:
            raise CandidateError(f"policy selected invalid node {nxt}")
        total += float(dist[current][nxt])
        unvisited.discard(nxt)
        current = nxt
    total += float(dist[current][start])
    return total


def evaluate_kp_constructive(policy: Callable, instance: KpInstance) -> float:
    """Total value packed by the policy; feasibility is enforced every step."""
    remaining = float(instance.capacity)
    values = instance.values
    weights = instance.weights
    alive = list(range(instance.n))
    total = 0.0
    while alive:
        sub_w = weights[alive]
        if not bool(np.any(sub_w <= remaining)):
            break
        sub_v = values[alive]
        try:
            chosen = policy(remaining, sub_v.copy(), sub_w.copy())
        except Exception as exc:
            raise CandidateError(f"policy raised: {exc!r}") from exc
        try:
            idx = int(chosen)
        except (TypeError, ValueError):
            raise CandidateError(f"policy returned a non-index: {chosen!r}") from None
        if not 0 <= idx < len(alive):
            raise CandidateError(f"item index {idx} out of range")
        if float(sub_w[idx]) > remaining:
            raise CandidateError("policy selected an item exceeding capacity")
        total += float(sub_v[idx])
        remaining -= float(sub_w[idx])
        alive.pop(idx)
    return total


def evaluate_bpp_online(policy: Callable, stream: BppStream) -> float:
    """Number of bins opened while placing the stream in arrival order.

    The policy scores each open bin; all -inf (or no feasible bin) opens a new
    one.  Placement into a bin without room is a candidate error.
    """
    capacity = int(stream.capacity)
    caps: list[float] = []
    for size in stream.sizes:
        size = float(size)
        chosen: Optional[int] = None
        if caps and any(c >= size for c in caps):
            try:
                raw = policy(size, np.array(caps, dtype=float))
            except Exception as exc:
                raise CandidateError(f"policy raised: {exc!r}") from exc
            try:
                priorities = np.asarray(raw, dtype=float)
            except (TypeError, ValueError):
                raise CandidateError("policy returned a malformed priority vector") from None
            if priorities.shape != (len(caps),):
                raise CandidateError(
                    f"priority vector has shape {priorities.shape}, expected ({len(caps)},)"
                )
            if bool(np.isnan(priorities).any()):
                raise CandidateError("priority vector contains NaN")
            if not bool(np.all(np.isneginf(priorities))):
                idx = int(np.argmax(priorities))
                if caps[idx] < size:
                    raise CandidateError("policy placed an item into a full bin")
                chosen = idx
        if chosen is None:
            caps.append(capacity - size)
        else:
            caps[chosen] -= size
    return float(len(caps))


def evaluate_instance(policy: Callable, problem: str, instance: Instance) -> float:
    if problem == "tsp":
        assert isinstance(instance, TspInstance)
        return evaluate_tsp_constructive(policy, instance)
    if problem == "kp":
        assert isinstance(instance, KpInstance)
        return evaluate_kp_constructive(policy, instance)
    if problem == "bpp_online":
        assert isinstance(instance, BppStream)
        return evaluate_bpp_online(policy, instance)
    raise ValueError(f"unknown problem kind {problem!r}")
