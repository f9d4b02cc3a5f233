"""Problem instances, constructive evaluators, reference baselines and oracles
for the three supported tasks: TSP, 0-1 knapsack, and online bin packing."""

from .instances import (
    BppStream,
    KpInstance,
    TspInstance,
    generate_instances,
    instance_set_to_json,
    instance_to_json,
    instances_from_json,
    load_instance_set,
    parse_instance,
    save_instance_set,
)
from .evaluators import (
    FitnessReport,
    aggregate_fitness,
    evaluate_bpp_online,
    evaluate_kp_constructive,
    evaluate_tsp_constructive,
    evaluate_instance,
)
from .baselines import BASELINES, SEED_HEURISTICS, BaselinePolicy
from .oracles import bpp_lower_bound, kp_oracle, oracle, tsp_oracle

__all__ = [
    "TspInstance",
    "KpInstance",
    "BppStream",
    "generate_instances",
    "instance_to_json",
    "parse_instance",
    "instance_set_to_json",
    "instances_from_json",
    "save_instance_set",
    "load_instance_set",
    "FitnessReport",
    "aggregate_fitness",
    "evaluate_tsp_constructive",
    "evaluate_kp_constructive",
    "evaluate_bpp_online",
    "evaluate_instance",
    "BASELINES",
    "SEED_HEURISTICS",
    "BaselinePolicy",
    "oracle",
    "tsp_oracle",
    "kp_oracle",
    "bpp_lower_bound",
]
