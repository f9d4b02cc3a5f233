"""Reference policies, kept as source text so the same definition can be
executed in-engine, sent through the guest harness, and used as the engine's
warm-start seed."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

NEAREST_NEIGHBOR = '''
def select_next_node(current_node, destination_node, unvisited_nodes, distance_matrix):
    """Greedy nearest neighbor."""
    return min(unvisited_nodes, key=lambda node: distance_matrix[current_node][node])
'''

TSP_DESTINATION_AWARE = '''
def select_next_node(current_node, destination_node, unvisited_nodes, distance_matrix):
    """Nearest neighbor with a mild pull toward the tour's end point."""
    bias = 0.1
    return min(
        unvisited_nodes,
        key=lambda node: distance_matrix[current_node][node]
        - bias * distance_matrix[node][destination_node],
    )
'''

TSP_SECOND_ORDER = '''
def select_next_node(current_node, destination_node, unvisited_nodes, distance_matrix):
    """Scores a candidate by its own distance plus its cheapest onward hop."""
    weight = 0.5
    best, best_score = None, None
    for node in unvisited_nodes:
        rest = [distance_matrix[node][other] for other in unvisited_nodes if other != node]
        onward = min(rest) if rest else distance_matrix[node][destination_node]
        score = distance_matrix[current_node][node] + weight * onward
        if best_score is None or score < best_score:
            best, best_score = node, score
    return best
'''

KP_DENSITY_GREEDY = '''
def select_next_item(remaining_capacity, values, weights):
    """Picks the feasible item with the highest value density."""
    best, best_score = 0, None
    for i in range(len(values)):
        if weights[i] <= remaining_capacity:
            score = values[i] / weights[i]
            if best_score is None or score > best_score:
                best, best_score = i, score
    return best
'''

KP_VALUE_GREEDY = '''
def select_next_item(remaining_capacity, values, weights):
    """Picks the feasible item with the highest raw value."""
    best, best_score = 0, None
    for i in range(len(values)):
        if weights[i] <= remaining_capacity:
            if best_score is None or values[i] > best_score:
                best, best_score = i, values[i]
    return best
'''

KP_LIGHT_GREEDY = '''
def select_next_item(remaining_capacity, values, weights):
    """Packs the lightest feasible item first."""
    best, best_w = 0, None
    for i in range(len(values)):
        if weights[i] <= remaining_capacity:
            if best_w is None or weights[i] < best_w:
                best, best_w = i, weights[i]
    return best
'''

BPP_FIRST_FIT = '''
def priority(item, bins_remain_cap):
    """First fit: earliest opened bin with room wins."""
    import numpy as np
    caps = np.asarray(bins_remain_cap, dtype=float)
    scores = -np.arange(len(caps), dtype=float)
    scores[caps < item] = -np.inf
    return scores
'''

BPP_BEST_FIT = '''
def priority(item, bins_remain_cap):
    """Best fit: tightest feasible bin wins."""
    import numpy as np
    caps = np.asarray(bins_remain_cap, dtype=float)
    scores = -(caps - item)
    scores[caps < item] = -np.inf
    return scores
'''

BPP_WORST_FIT = '''
def priority(item, bins_remain_cap):
    """Worst fit: roomiest feasible bin wins."""
    import numpy as np
    caps = np.asarray(bins_remain_cap, dtype=float)
    scores = caps - item
    scores[caps < item] = -np.inf
    return scores
'''

ENTRY_POINTS = {
    "tsp": "select_next_node",
    "kp": "select_next_item",
    "bpp_online": "priority",
}

PROBLEM_DESCRIPTIONS = {
    "tsp": (
        "Traveling salesman: visit every node exactly once and return to the "
        "start, minimizing total Euclidean tour length. At each step, pick the "
        "next node to visit given the current node, the destination node, the "
        "set of unvisited nodes, and the full distance matrix."
    ),
    "kp": (
        "0-1 knapsack: maximize the total value of selected items without the "
        "summed weight exceeding the capacity. At each step, given the "
        "remaining capacity and the arrays of values and weights of the items "
        "still available, return the index of the next item to pack."
    ),
    "bpp_online": (
        "Online bin packing: items arrive one at a time and must be placed "
        "immediately into a bin without exceeding bin capacity, minimizing the "
        "number of bins used. Given the arriving item size and the array of "
        "remaining capacities of open bins, return one priority score per bin; "
        "the highest-priority feasible bin receives the item, and all -inf "
        "opens a new bin."
    ),
}


def compile_policy(source: str, entry: str) -> Callable:
    """Exec ``source`` in a fresh namespace and return the entry callable."""
    namespace: dict = {}
    exec(compile(source, "<candidate>", "exec"), namespace)
    fn = namespace.get(entry)
    if not callable(fn):
        raise KeyError(f"no callable named {entry!r} in candidate source")
    return fn


@dataclass(frozen=True)
class BaselinePolicy:
    name: str
    problem: str
    source: str

    @property
    def entry(self) -> str:
        return ENTRY_POINTS[self.problem]

    def load(self) -> Callable:
        return compile_policy(self.source, self.entry)


BASELINES: dict[str, list[BaselinePolicy]] = {
    "tsp": [
        BaselinePolicy("greedy", "tsp", NEAREST_NEIGHBOR),
        BaselinePolicy("destination_aware", "tsp", TSP_DESTINATION_AWARE),
        BaselinePolicy("second_order", "tsp", TSP_SECOND_ORDER),
    ],
    "kp": [
        BaselinePolicy("greedy", "kp", KP_DENSITY_GREEDY),
        BaselinePolicy("value_greedy", "kp", KP_VALUE_GREEDY),
        BaselinePolicy("light_greedy", "kp", KP_LIGHT_GREEDY),
    ],
    "bpp_online": [
        BaselinePolicy("first_fit", "bpp_online", BPP_FIRST_FIT),
        BaselinePolicy("best_fit", "bpp_online", BPP_BEST_FIT),
        BaselinePolicy("worst_fit", "bpp_online", BPP_WORST_FIT),
    ],
}

SEED_HEURISTICS: dict[str, BaselinePolicy] = {
    "tsp": BASELINES["tsp"][0],
    "kp": BASELINES["kp"][0],
    "bpp_online": BASELINES["bpp_online"][1],
}
