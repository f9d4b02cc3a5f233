"""Numeric-constant calibration for candidate heuristics.

Finds tunable literals in the source, brackets them with a trust region
proportional to each value's magnitude, and runs a small rand/1 differential
mutation search with binomial crossover and greedy acceptance.  Substitution
rewrites literal spans only, so the heuristic's structure is untouched and no
further LLM calls are needed.
"""

from .params import ParamSpec, identify_params, substitute
from .region import TrustRegion, build_trust_region
from .de import TuneBudget, TuneOutcome, de_trial, init_micro_population, tune

__all__ = [
    "ParamSpec",
    "identify_params",
    "substitute",
    "TrustRegion",
    "build_trust_region",
    "TuneBudget",
    "TuneOutcome",
    "init_micro_population",
    "de_trial",
    "tune",
]
