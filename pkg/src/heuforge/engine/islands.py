"""Warm-start initialization and the per-island inner generation."""

from __future__ import annotations

import ast
import math
import random
from dataclasses import dataclass, field
from typing import Any, Optional

from ..astmetric import normalize
from ..config import RunConfig
from ..errors import ParseError, SeedInvalid, TransportError
from ..llm import Gateway, ParentInfo, ParsedResponse, PromptContext, Strategy
from ..llm.context import CROSSOVER_STRATEGIES
from ..problems.baselines import ENTRY_POINTS, PROBLEM_DESCRIPTIONS, SEED_HEURISTICS
from ..scheduler import SchedulerState, reward_from_fitness, select, snapshot, update
from ..tuner import TuneBudget, tune
from .evaluation import CandidateEvaluator
from .state import Individual, IslandState


@dataclass
class GenerationOutcome:
    island: int
    generation: int
    strategy: str
    reward: float = 0.0
    evals_used: int = 0
    failure: Optional[str] = None
    accepted: bool = False
    candidate_objective: float = math.inf
    tuned: bool = False
    tuning: Optional[dict[str, Any]] = None
    elite_objective: float = math.inf
    stagnation: int = 0
    arms: dict[str, Any] = field(default_factory=dict)
    merged: Optional[Individual] = None


def _seed_individual(config: RunConfig, evaluator: CandidateEvaluator) -> Individual:
    policy = SEED_HEURISTICS[config.problem.kind]
    code = policy.source.strip() + "\n"
    fitness, result = evaluator.evaluate(code, policy.entry)
    if not math.isfinite(fitness):
        detail = result.error.message if result.error else "non-finite fitness"
        raise SeedInvalid(f"seed heuristic failed its own evaluation: {detail}")
    doc = ast.get_docstring(ast.parse(code).body[0]) or policy.name
    return Individual(
        code=code,
        entry=policy.entry,
        thought=doc,
        key_params="",
        objective=fitness,
        origin={"strategy": "seed", "generation": 0, "island": -1},
    )


def _context(config: RunConfig, parents: list[ParentInfo], island: IslandState | None = None):
    kind = config.problem.kind
    return PromptContext(
        problem_desc=PROBLEM_DESCRIPTIONS[kind],
        func_name=ENTRY_POINTS[kind],
        parents=parents,
        local_insight=island.insight if island else None,
        neighbor_insight=island.neighbor_insight if island else None,
    )


def _as_parent(individual: Individual) -> ParentInfo:
    return ParentInfo(
        thought=individual.thought, code=individual.code, objective=individual.objective
    )


def _try_offspring(
    config: RunConfig,
    gateway: Gateway,
    evaluator: CandidateEvaluator,
    parents: list[ParentInfo],
    strategy: Strategy,
    origin: dict[str, Any],
    island: IslandState | None = None,
) -> tuple[Optional[Individual], int, Optional[str]]:
    """One generate-and-evaluate attempt: (individual, evals_used, failure)."""
    try:
        parsed = gateway.generate(strategy, _context(config, parents, island))
    except TransportError:
        return None, 0, "transport"
    if not isinstance(parsed, ParsedResponse):
        return None, 0, "malformed"
    fitness, result = evaluator.evaluate(parsed.code, parsed.entry)
    if not math.isfinite(fitness):
        kind = result.error.kind if result.error else "exec_error"
        return None, 1, kind
    try:
        tree = normalize(parsed.code)
    except ParseError:
        return None, 1, "parse_error"
    individual = Individual(
        code=parsed.code,
        entry=parsed.entry,
        thought=parsed.thought,
        key_params=parsed.key_params,
        objective=fitness,
        origin=origin,
        _tree=tree,
    )
    return individual, 1, None


def init_islands(
    config: RunConfig, gateway: Gateway, evaluator: CandidateEvaluator
) -> tuple[list[IslandState], Individual, int]:
    """Populate every island with the evaluated seed plus mutation variants.

    Failed generations are retried up to a bound, then the island is padded
    with seed copies.  Returns (islands, seed individual, evaluations used).
    """
    seed = _seed_individual(config, evaluator)
    evals = 1
    islands: list[IslandState] = []
    cap = config.islands.population
    budget = config.islands.init_retry_factor * cap
    for island_id in range(config.islands.count):
        population = [seed.clone()]
        attempts = 0
        while len(population) < cap and attempts < budget:
            attempts += 1
            origin = {"strategy": "init", "generation": 0, "island": island_id}
            child, used, _ = _try_offspring(
                config, gateway, evaluator, [_as_parent(seed)], Strategy.M1, origin
            )
            evals += used
            if child is not None:
                population.append(child)
        while len(population) < cap:
            population.append(seed.clone())
        island = IslandState(
            id=island_id,
            population=population,
            scheduler=SchedulerState(c=config.scheduler.exploration),
        )
        island.sort_and_truncate(cap)
        islands.append(island)
    return islands, seed, evals


def _tournament(island: IslandState, rng: random.Random, size: int) -> Individual:
    pool = island.population
    if len(pool) == 1:
        return pool[0]
    picks = rng.sample(range(len(pool)), min(size, len(pool)))
    return pool[min(picks)]  # population is sorted, lower index wins


def _select_parents(
    island: IslandState, strategy: Strategy, rng: random.Random, config: RunConfig
) -> list[Individual]:
    if strategy in CROSSOVER_STRATEGIES:
        return [
            _tournament(island, rng, config.islands.tournament_size)
            for _ in range(config.islands.parents_k)
        ]
    return [island.elite]


def _is_duplicate(island: IslandState, candidate: Individual) -> bool:
    return any(
        member.tree == candidate.tree and member.literals == candidate.literals
        for member in island.population
    )


def inner_generation(
    island: IslandState,
    gateway: Gateway,
    evaluator: CandidateEvaluator,
    config: RunConfig,
    rng: random.Random,
    generation: int,
) -> GenerationOutcome:
    """One slot of the island's inner loop.

    Select a strategy, generate and evaluate one offspring, tune it when it is
    competitive with the elite, merge under rank survival, then pay the reward
    into the scheduler and update stagnation.
    """
    strategy = select(island.scheduler)
    outcome = GenerationOutcome(island=island.id, generation=generation, strategy=strategy.value)
    prev_best = island.elite.objective
    parents = _select_parents(island, strategy, rng, config)
    origin = {"strategy": strategy.value, "generation": generation, "island": island.id}
    candidate, evals, failure = _try_offspring(
        config, gateway, evaluator, [_as_parent(p) for p in parents], strategy, origin, island
    )
    outcome.evals_used += evals

    if candidate is not None:
        outcome.candidate_objective = candidate.objective
        gate = prev_best + config.tuner.gate_slack * abs(prev_best)
        if candidate.objective <= gate:
            budget = TuneBudget(
                generations=config.tuner.generations,
                f=config.tuner.f,
                cr=config.tuner.cr,
                n_tune=config.tuner.n_tune,
                rho=config.tuner.rho,
                near_zero_eps=config.tuner.near_zero_eps,
            )
            tuned = tune(
                candidate.code,
                candidate.key_params,
                candidate.objective,
                evaluator.make_tuner_evaluator(candidate.entry),
                budget,
                rng,
            )
            outcome.evals_used += tuned.evals_used
            if tuned.dims > 0:
                outcome.tuning = {
                    "island": island.id,
                    "generation": generation,
                    "dims": tuned.dims,
                    "evals": tuned.evals_used,
                    "before": candidate.objective,
                    "after": tuned.objective,
                }
            if tuned.improved:
                candidate = Individual(
                    code=tuned.code,
                    entry=candidate.entry,
                    thought=candidate.thought,
                    key_params=candidate.key_params,
                    objective=tuned.objective,
                    origin=candidate.origin,
                    tuned=True,
                )
                outcome.tuned = True
                outcome.candidate_objective = tuned.objective

        if _is_duplicate(island, candidate):
            outcome.failure = "duplicate"
            outcome.reward = 0.0
        else:
            island.population.append(candidate)
            island.sort_and_truncate(config.islands.population)
            outcome.accepted = candidate in island.population
            outcome.merged = candidate
            outcome.reward = reward_from_fitness(prev_best, candidate.objective)
    else:
        outcome.failure = failure
        outcome.reward = 0.0

    update(island.scheduler, strategy, outcome.reward)
    if island.elite.objective < prev_best:
        island.stagnation = 0
    else:
        island.stagnation += 1
    outcome.elite_objective = island.elite.objective
    outcome.stagnation = island.stagnation
    outcome.arms = snapshot(island.scheduler)
    return outcome
