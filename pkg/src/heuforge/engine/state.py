"""Evolutionary state: individuals, islands, the global archive, events."""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from typing import Any, Optional

from ..astmetric import NormalizedTree, normalize
from ..scheduler import ArmStats, SchedulerState
from ..llm.context import Strategy


def literal_signature(code: str) -> tuple[float, ...]:
    """Ordered numeric literals of the source; equal trees with equal
    signatures are the same heuristic down to its constants."""
    try:
        module = ast.parse(code)
    except (SyntaxError, ValueError):
        return ()
    values: list[float] = []
    for node in ast.walk(module):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            if not isinstance(node.value, bool):
                values.append(float(node.value))
    return tuple(values)


@dataclass
class Individual:
    code: str
    entry: str
    thought: str
    key_params: str
    objective: float
    origin: dict[str, Any]
    tuned: bool = False
    _tree: Optional[NormalizedTree] = field(default=None, repr=False, compare=False)
    _literals: Optional[tuple[float, ...]] = field(default=None, repr=False, compare=False)

    @property
    def tree(self) -> NormalizedTree:
        if self._tree is None:
            self._tree = normalize(self.code)
        return self._tree

    @property
    def literals(self) -> tuple[float, ...]:
        if self._literals is None:
            self._literals = literal_signature(self.code)
        return self._literals

    def clone(self) -> "Individual":
        return Individual(
            code=self.code,
            entry=self.entry,
            thought=self.thought,
            key_params=self.key_params,
            objective=self.objective,
            origin=dict(self.origin),
            tuned=self.tuned,
            _tree=self._tree,
            _literals=self._literals,
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "code": self.code,
            "entry": self.entry,
            "thought": self.thought,
            "key_params": self.key_params,
            "objective": self.objective,
            "origin": self.origin,
            "tuned": self.tuned,
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "Individual":
        return cls(
            code=obj["code"],
            entry=obj["entry"],
            thought=obj["thought"],
            key_params=obj["key_params"],
            objective=float(obj["objective"]),
            origin=dict(obj["origin"]),
            tuned=bool(obj["tuned"]),
        )


@dataclass
class IslandState:
    id: int
    population: list[Individual]
    scheduler: SchedulerState
    insight: Optional[str] = None
    neighbor_insight: Optional[str] = None
    stagnation: int = 0
    last_migration_generation: int = -(10**9)

    @property
    def elite(self) -> Individual:
        return self.population[0]

    @property
    def worst(self) -> Individual:
        return self.population[-1]

    def sort_and_truncate(self, cap: int) -> None:
        self.population.sort(key=lambda ind: ind.objective)
        del self.population[cap:]

    def codes(self) -> list[str]:
        return [ind.code for ind in self.population]

    def to_json(self) -> dict[str, Any]:
        from ..scheduler import snapshot

        return {
            "id": self.id,
            "population": [ind.to_json() for ind in self.population],
            "scheduler": {"c": self.scheduler.c, "arms": snapshot(self.scheduler)},
            "insight": self.insight,
            "neighbor_insight": self.neighbor_insight,
            "stagnation": self.stagnation,
            "last_migration_generation": self.last_migration_generation,
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "IslandState":
        sched = SchedulerState(c=float(obj["scheduler"]["c"]))
        total = 0
        for tag, stats in obj["scheduler"]["arms"].items():
            strategy = Strategy(tag)
            sched.arms[strategy] = ArmStats(strategy, q=float(stats["q"]), n=int(stats["n"]))
            total += int(stats["n"])
        sched.total = total
        return cls(
            id=int(obj["id"]),
            population=[Individual.from_json(o) for o in obj["population"]],
            scheduler=sched,
            insight=obj.get("insight"),
            neighbor_insight=obj.get("neighbor_insight"),
            stagnation=int(obj["stagnation"]),
            last_migration_generation=int(obj["last_migration_generation"]),
        )


@dataclass
class GlobalArchive:
    best: Optional[Individual] = None
    history: list[tuple[int, float]] = field(default_factory=list)

    def consider(self, individual: Individual) -> bool:
        """Adopt the individual if it strictly improves the best-ever."""
        if not math.isfinite(individual.objective):
            return False
        if self.best is None or individual.objective < self.best.objective:
            self.best = individual.clone()
            return True
        return False

    def record(self, evaluations: int) -> None:
        assert self.best is not None
        self.history.append((evaluations, self.best.objective))

    def to_json(self) -> dict[str, Any]:
        return {
            "best": self.best.to_json() if self.best else None,
            "history": [[e, o] for e, o in self.history],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "GlobalArchive":
        return cls(
            best=Individual.from_json(obj["best"]) if obj.get("best") else None,
            history=[(int(e), float(o)) for e, o in obj.get("history", [])],
        )


@dataclass(frozen=True)
class MigrationEvent:
    source: int
    target: int
    score: float
    mode: str  # code_transfer | insight_transfer
    generation: int

    def to_json(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "target": self.target,
            "score": self.score,
            "mode": self.mode,
            "generation": self.generation,
        }
