"""Nested evolutionary controller: per-island inner loops (UCB-selected
prompting, evaluation, conditional tuning, rank survival) under an outer
coordinator that runs similarity-guided migration and fusion resets."""

from .state import GlobalArchive, Individual, IslandState, MigrationEvent
from .evaluation import CandidateEvaluator
from .islands import init_islands, inner_generation
from .coordination import coordinate_migration, fusion_reset
from .run import Engine, load_checkpoint, run_from_config

__all__ = [
    "Individual",
    "IslandState",
    "GlobalArchive",
    "MigrationEvent",
    "CandidateEvaluator",
    "init_islands",
    "inner_generation",
    "coordinate_migration",
    "fusion_reset",
    "Engine",
    "run_from_config",
    "load_checkpoint",
]
