"""Differential-mutation micro-search over a candidate's constants.

The candidate's current parameter vector is the search incumbent.  Each
generation draws a fresh micro-population of Gaussian perturbations around the
incumbent, builds one rand/1 trial per perturbed member (mutant from the
members, binomial crossover against the incumbent), evaluates the batch, and
greedily replaces the incumbent only when the best trial strictly improves it.
The refreshed cloud keeps difference vectors from collapsing, which a
four-vector population cannot avoid otherwise; everything stays inside the
trust region and the incumbent's objective never increases.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import PopulationTooSmall
from .params import identify_params, substitute
from .region import TrustRegion, build_trust_region

DEFAULT_N_TUNE = 3
DEFAULT_F = 0.5
DEFAULT_CR = 0.9
DEFAULT_GENERATIONS = 5
GAUSS_SIGMA_FRACTION = 0.1

Vector = tuple[float, ...]


@dataclass
class TuneBudget:
    generations: int = DEFAULT_GENERATIONS
    f: float = DEFAULT_F
    cr: float = DEFAULT_CR
    n_tune: int = DEFAULT_N_TUNE
    rho: float = 0.5
    near_zero_eps: float = 1e-6


@dataclass
class TuneOutcome:
    code: str
    objective: float
    improved: bool
    evals_used: int
    dims: int


def _perturbed(
    center: Vector, region: TrustRegion, rng: random.Random, count: int
) -> list[Vector]:
    sigmas = [GAUSS_SIGMA_FRACTION * w for w in region.widths()]
    return [
        region.clip(tuple(x + rng.gauss(0.0, s) for x, s in zip(center, sigmas)))
        for _ in range(count)
    ]


def init_micro_population(
    x_init: Vector, region: TrustRegion, rng: random.Random, n_perturbed: int = DEFAULT_N_TUNE
) -> list[Vector]:
    """Incumbent plus ``n_perturbed`` Gaussian-perturbed vectors, clipped in."""
    return [tuple(x_init), *_perturbed(tuple(x_init), region, rng, n_perturbed)]


def de_trial(
    population: Sequence[Vector],
    target: int,
    f: float,
    cr: float,
    rng: random.Random,
    region: TrustRegion,
) -> Vector:
    """rand/1 mutant combined with the target by binomial crossover."""
    if len(population) < 4:
        raise PopulationTooSmall("rand/1 needs a population of at least 4 vectors")
    others = [idx for idx in range(len(population)) if idx != target]
    r1, r2, r3 = rng.sample(others, 3)
    base, plus, minus = population[r1], population[r2], population[r3]
    mutant = region.clip(tuple(b + f * (p - m) for b, p, m in zip(base, plus, minus)))
    dims = len(mutant)
    j_rand = rng.randrange(dims)
    return tuple(
        mutant[j] if rng.random() <= cr or j == j_rand else population[target][j]
        for j in range(dims)
    )


def tune(
    code: str,
    key_params_text: str,
    incumbent_objective: float,
    evaluate_many: Callable[[list[str]], list[float]],
    budget: TuneBudget,
    rng: random.Random,
) -> TuneOutcome:
    """Calibrate the candidate's constants within the trust region.

    ``evaluate_many`` maps candidate sources to fitness values (minimize
    convention, +inf on failure); the trials of one generation go through it
    as a single batch.  Zero tunable dimensions or an all-failed search return
    the candidate unchanged.
    """
    specs = identify_params(code, key_params_text)
    if not specs:
        return TuneOutcome(code, incumbent_objective, False, 0, 0)
    x_init: Vector = tuple(spec.value for spec in specs)
    region = build_trust_region(x_init, rho=budget.rho, near_zero_eps=budget.near_zero_eps)
    population = init_micro_population(x_init, region, rng, budget.n_tune)
    incumbent: Vector = population[0]
    incumbent_fitness = incumbent_objective

    evals_used = 0
    for generation in range(budget.generations):
        if generation > 0:
            population = [incumbent, *_perturbed(incumbent, region, rng, budget.n_tune)]
        trials = [
            de_trial(population, 0, budget.f, budget.cr, rng, region)
            for _ in range(budget.n_tune)
        ]
        fitnesses = evaluate_many([substitute(code, specs, u) for u in trials])
        evals_used += len(trials)
        best_slot = min(range(len(trials)), key=lambda k: fitnesses[k])
        if fitnesses[best_slot] < incumbent_fitness:
            incumbent = trials[best_slot]
            incumbent_fitness = fitnesses[best_slot]

    if incumbent_fitness < incumbent_objective and not math.isinf(incumbent_fitness):
        tuned = substitute(code, specs, incumbent)
        return TuneOutcome(tuned, incumbent_fitness, True, evals_used, len(specs))
    return TuneOutcome(code, incumbent_objective, False, evals_used, len(specs))
