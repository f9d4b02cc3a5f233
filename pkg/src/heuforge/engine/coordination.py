"""Outer-loop coordination: similarity-guided dual-mode migration and the
constructive fusion reset for deeply stagnant islands."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

from ..astmetric import similarity_matrix
from ..config import RunConfig
from ..errors import TransportError
from ..llm import Gateway, ParsedResponse, PromptContext, Strategy
from ..problems.baselines import ENTRY_POINTS, PROBLEM_DESCRIPTIONS
from .evaluation import CandidateEvaluator
from .islands import _as_parent, _try_offspring
from .state import GlobalArchive, Individual, IslandState, MigrationEvent


def coordinate_migration(
    islands: list[IslandState],
    generation: int,
    gateway: Gateway,
    config: RunConfig,
) -> tuple[list[MigrationEvent], Optional[list[list[float]]]]:
    """Run the dual-mode transfer for every eligible (stagnant, cooled-down)
    island.

    The source is the best-elite island among the others.  High structural
    similarity means the source elite overwrites the target's worst member;
    low similarity distills the source elite into prose injected as the
    target's neighbor insight.  A failed insight completion skips the event
    without touching state.
    """
    cfg = config.islands
    eligible = [
        island
        for island in islands
        if island.stagnation >= cfg.migration_stagnation
        and generation - island.last_migration_generation >= cfg.migration_cooldown
    ]
    if not eligible or len(islands) < 2:
        return [], None

    matrix = similarity_matrix([island.codes() for island in islands])
    elite_snapshot = {island.id: island.elite.objective for island in islands}
    events: list[MigrationEvent] = []
    for target in sorted(eligible, key=lambda isl: isl.id):
        source_id = min(
            (i for i in elite_snapshot if i != target.id),
            key=lambda i: (elite_snapshot[i], i),
        )
        source = islands[source_id]
        score = matrix[source_id][target.id]
        if score > cfg.similarity_threshold:
            donor = source.elite.clone()
            donor.origin = {
                "strategy": "migration",
                "generation": generation,
                "island": target.id,
                "from_island": source_id,
            }
            target.population[-1] = donor
            target.sort_and_truncate(cfg.population)
            mode = "code_transfer"
        else:
            context = PromptContext(
                problem_desc=PROBLEM_DESCRIPTIONS[config.problem.kind],
                func_name=ENTRY_POINTS[config.problem.kind],
                parents=[_as_parent(source.elite), _as_parent(target.worst)],
            )
            try:
                text = gateway.complete_raw(Strategy.INSIGHT, context)
            except TransportError:
                continue
            if not text.strip():
                continue
            target.neighbor_insight = text.strip()
            mode = "insight_transfer"
        target.last_migration_generation = generation
        events.append(
            MigrationEvent(
                source=source_id,
                target=target.id,
                score=score,
                mode=mode,
                generation=generation,
            )
        )
    return events, matrix


@dataclass
class ResetOutcome:
    island: int
    generation: int
    succeeded: bool
    evals_used: int

    def to_json(self) -> dict[str, Any]:
        return {
            "island": self.island,
            "generation": self.generation,
            "succeeded": self.succeeded,
            "evals_used": self.evals_used,
        }


def fusion_reset(
    island: IslandState,
    archive: GlobalArchive,
    gateway: Gateway,
    evaluator: CandidateEvaluator,
    config: RunConfig,
    generation: int,
) -> Optional[ResetOutcome]:
    """Knowledge-guided restart for a deeply stagnant island.

    The global elite is hybridized into a structurally novel candidate; on
    success it joins the kept elite and reseeds the rest of the population via
    mutation variants.  On failure the island is left unchanged and its
    stagnation counter halves so resets cannot storm.
    """
    cfg = config.islands
    if island.stagnation < cfg.reset_stagnation:
        return None
    assert archive.best is not None
    outcome = ResetOutcome(island=island.id, generation=generation, succeeded=False, evals_used=0)

    context = PromptContext(
        problem_desc=PROBLEM_DESCRIPTIONS[config.problem.kind],
        func_name=ENTRY_POINTS[config.problem.kind],
        global_elite=_as_parent(archive.best),
    )
    origin = {"strategy": "RESET", "generation": generation, "island": island.id}
    hybrid: Optional[Individual] = None
    try:
        parsed = gateway.generate(Strategy.RESET, context)
    except TransportError:
        parsed = None
    if isinstance(parsed, ParsedResponse):
        fitness, _ = evaluator.evaluate(parsed.code, parsed.entry)
        outcome.evals_used += 1
        if math.isfinite(fitness):
            hybrid = Individual(
                code=parsed.code,
                entry=parsed.entry,
                thought=parsed.thought,
                key_params=parsed.key_params,
                objective=fitness,
                origin=origin,
            )
    if hybrid is None:
        island.stagnation //= 2
        return outcome

    population = [island.elite, hybrid]
    attempts = 0
    budget = cfg.init_retry_factor * cfg.population
    while len(population) < cfg.population and attempts < budget:
        attempts += 1
        child, used, _ = _try_offspring(
            config,
            gateway,
            evaluator,
            [_as_parent(hybrid)],
            Strategy.M1,
            {"strategy": "reset_regen", "generation": generation, "island": island.id},
            island,
        )
        outcome.evals_used += used
        if child is not None:
            population.append(child)
    while len(population) < cfg.population:
        population.append(hybrid.clone())
    island.population = population
    island.sort_and_truncate(cfg.population)
    island.stagnation = 0
    outcome.succeeded = True
    return outcome
