"""Non-stationary bandit over the five generation strategies.

Plain UCB1 with a configurable exploration constant: unplayed arms go first in
a fixed order, then the arm maximizing ``Q + C * sqrt(2 ln N / n)`` wins, ties
broken by the same fixed order so replayed runs reproduce exactly.  The reward
is the clamped relative fitness gain of the offspring over the island's best.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .llm.context import GENERATION_STRATEGIES, Strategy

DEFAULT_EXPLORATION = math.sqrt(2.0)


@dataclass
class ArmStats:
    strategy: Strategy
    q: float = 0.0  # running mean reward, only meaningful once n >= 1
    n: int = 0


@dataclass
class SchedulerState:
    c: float = DEFAULT_EXPLORATION
    arms: dict[Strategy, ArmStats] = field(default_factory=dict)
    total: int = 0

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("exploration constant must be positive")
        if not self.arms:
            self.arms = {s: ArmStats(s) for s in GENERATION_STRATEGIES}


def select(state: SchedulerState) -> Strategy:
    # the arm dict's insertion order is the fixed play/tie-break order
    for strategy, arm in state.arms.items():
        if arm.n == 0:
            return strategy
    log_total = math.log(state.total)
    best, best_score = None, -math.inf
    for strategy, arm in state.arms.items():
        score = arm.q + state.c * math.sqrt(2.0 * log_total / arm.n)
        if score > best_score:  # strict: ties keep the earlier strategy
            best, best_score = strategy, score
    assert best is not None
    return best


def reward_from_fitness(prev_best: float, child: float) -> float:
    """Clamped relative improvement of the child over the previous best.

    A failed or non-finite child earns nothing.  A zero previous best
    degenerates the relative gain, so strict improvement then maps to full
    reward and anything else to zero.
    """
    if not math.isfinite(child):
        return 0.0
    if prev_best == 0.0:
        return 1.0 if child < 0.0 else 0.0
    gain = (prev_best - child) / abs(prev_best)
    return min(1.0, max(0.0, gain))


def update(state: SchedulerState, strategy: Strategy, reward: float) -> None:
    if not 0.0 <= reward <= 1.0:
        raise ValueError(f"reward must lie in [0, 1], got {reward}")
    arm = state.arms[strategy]
    arm.n += 1
    arm.q += (reward - arm.q) / arm.n
    state.total += 1


def snapshot(state: SchedulerState) -> dict:
    """Telemetry-ready view of per-arm statistics."""
    return {s.value: {"q": arm.q, "n": arm.n} for s, arm in state.arms.items()}
