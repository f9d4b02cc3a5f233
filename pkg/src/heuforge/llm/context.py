"""Prompt strategy tags and the context bundle a prompt is rendered from."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional


class Strategy(str, enum.Enum):
    """Generation strategies.

    E1/E2 are crossover operators consuming several parents; M1/M2/M3 mutate a
    single parent; INSIGHT contrasts a best/worst pair into prose; RESET
    rebuilds from the global elite.
    """

    E1 = "E1"
    E2 = "E2"
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    INSIGHT = "INSIGHT"
    RESET = "RESET"


#: the bandit's action space, in fixed tie-break order
GENERATION_STRATEGIES = (Strategy.E1, Strategy.E2, Strategy.M1, Strategy.M2, Strategy.M3)

CROSSOVER_STRATEGIES = (Strategy.E1, Strategy.E2)
MUTATION_STRATEGIES = (Strategy.M1, Strategy.M2, Strategy.M3)


@dataclass(frozen=True)
class ParentInfo:
    thought: str
    code: str
    objective: float


@dataclass
class PromptContext:
    problem_desc: str
    func_name: str
    parents: list[ParentInfo] = field(default_factory=list)
    local_insight: Optional[str] = None
    neighbor_insight: Optional[str] = None
    global_elite: Optional[ParentInfo] = None
