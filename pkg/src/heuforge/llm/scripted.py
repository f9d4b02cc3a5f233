"""Built-in deterministic completion bank.

Offline stand-in for a live endpoint: every response is a pure function of
the request digest, so recording and replaying it is exact.  The bank emits
plausible heuristic variants with digest-jittered constants (so the tuner has
real work to do), insight prose for contrastive prompts, and an occasional
malformed or broken completion to keep the failure paths honest.
"""

from __future__ import annotations

from .templates import ANALYST_SYSTEM
from .transport import ScriptedTransport


def _jitter(h: int, slot: int, lo: float, hi: float) -> float:
    unit = ((h >> (6 * slot)) & 0x3F) / 63.0
    return round(lo + unit * (hi - lo), 4)


_TSP_VARIANTS = [
    (
        "Pick the nearest unvisited node but discount nodes close to the tour's "
        "end point so the return leg stays short. Greedy with a destination-aware bias.",
        "- w_dest: strength of the destination discount",
        '''import math

def select_next_node_v2(current_node, destination_node, unvisited_nodes, distance_matrix):
    w_dest = {a}
    return min(
        unvisited_nodes,
        key=lambda n: distance_matrix[current_node][n]
        - w_dest * distance_matrix[n][destination_node],
    )
''',
        (("a", 0.02, 0.35),),
    ),
    (
        "Score each candidate by its hop cost plus a share of its cheapest onward "
        "continuation. One-step lookahead keeps the tour from painting itself into corners.",
        "- w_onward: weight of the cheapest onward hop",
        '''import math

def select_next_node_v2(current_node, destination_node, unvisited_nodes, distance_matrix):
    w_onward = {a}
    best, best_score = None, math.inf
    for n in unvisited_nodes:
        rest = [distance_matrix[n][m] for m in unvisited_nodes if m != n]
        onward = min(rest) if rest else distance_matrix[n][destination_node]
        score = distance_matrix[current_node][n] + w_onward * onward
        if score < best_score:
            best, best_score = n, score
    return best
''',
        (("a", 0.2, 0.9),),
    ),
    (
        "Blend the hop cost with a mild repulsion from the destination early on. "
        "Two scaled terms trade immediate cost against closing flexibility.",
        "- w_hop: scale of the immediate hop cost\n- w_pull: scale of the destination pull",
        '''import math

def select_next_node_v2(current_node, destination_node, unvisited_nodes, distance_matrix):
    w_hop = {a}
    w_pull = {b}
    best, best_score = None, math.inf
    for n in unvisited_nodes:
        score = w_hop * distance_matrix[current_node][n] + w_pull * (
            distance_matrix[n][destination_node] / (len(unvisited_nodes) + 1)
        )
        if score < best_score:
            best, best_score = n, score
    return best
''',
        (("a", 0.7, 1.3), ("b", 0.05, 0.6)),
    ),
    (
        "Plain nearest neighbor. No knobs, nothing to tune, hard to beat for its cost.",
        "(none)",
        '''def select_next_node_v2(current_node, destination_node, unvisited_nodes, distance_matrix):
    return min(unvisited_nodes, key=lambda n: distance_matrix[current_node][n])
''',
        (),
    ),
]

_KP_VARIANTS = [
    (
        "Rank feasible items by value density raised to a tunable exponent. "
        "The exponent interpolates between value-greedy and density-greedy behavior.",
        "- density_exp: exponent on the weight in the density ratio",
        '''import numpy as np

def select_next_item_v2(remaining_capacity, values, weights):
    density_exp = {a}
    feasible = np.where(weights <= remaining_capacity)[0]
    scores = values[feasible] / np.power(weights[feasible], density_exp)
    return int(feasible[int(np.argmax(scores))])
''',
        (("a", 0.6, 1.4),),
    ),
    (
        "Density greedy with a bonus for items that leave usable capacity behind. "
        "A fit bonus discourages awkward leftovers.",
        "- fit_bonus: reward for snug capacity use",
        '''import numpy as np

def select_next_item_v2(remaining_capacity, values, weights):
    fit_bonus = {a}
    feasible = np.where(weights <= remaining_capacity)[0]
    density = values[feasible] / weights[feasible]
    snug = weights[feasible] / (remaining_capacity + 1e-9)
    scores = density + fit_bonus * snug
    return int(feasible[int(np.argmax(scores))])
''',
        (("a", 0.0, 0.8),),
    ),
    (
        "Convex blend of raw value and value density. Mixing coefficient decides "
        "whether big prizes or efficiency dominate.",
        "- blend: weight of raw value against density",
        '''import numpy as np

def select_next_item_v2(remaining_capacity, values, weights):
    blend = {a}
    feasible = np.where(weights <= remaining_capacity)[0]
    density = values[feasible] / weights[feasible]
    scores = blend * values[feasible] + (1.0 - blend) * density
    return int(feasible[int(np.argmax(scores))])
''',
        (("a", 0.05, 0.6),),
    ),
]

_BPP_VARIANTS = [
    (
        "Best fit with a penalty on leftovers too small to ever host another item. "
        "Penalizing dead space defers bin openings.",
        "- dead_threshold: leftover size considered unusable\n- dead_penalty: score cost of dead space",
        '''import numpy as np

def priority_v2(item, bins_remain_cap):
    dead_threshold = {a}
    dead_penalty = {b}
    caps = np.asarray(bins_remain_cap, dtype=float)
    leftover = caps - item
    scores = -leftover
    scores = scores - dead_penalty * ((leftover > 0) & (leftover < dead_threshold))
    scores[caps < item] = -np.inf
    return scores
''',
        (("a", 2.0, 18.0), ("b", 0.5, 12.0)),
    ),
    (
        "Score bins by how close the item lands them to a target utilization. "
        "A Gaussian window around the target balances snugness and reuse.",
        "- target_ratio: leftover fraction to aim for\n- width: tolerance of the window",
        '''import numpy as np

def priority_v2(item, bins_remain_cap):
    target_ratio = {a}
    width = {b}
    caps = np.asarray(bins_remain_cap, dtype=float)
    leftover = caps - item
    cap_est = max(float(np.max(caps)), item)
    deviation = (leftover / (cap_est + 1e-9) - target_ratio) / (width + 1e-9)
    scores = np.exp(-0.5 * deviation**2)
    scores[caps < item] = -np.inf
    return scores
''',
        (("a", 0.05, 0.5), ("b", 0.1, 0.5)),
    ),
    (
        "First fit with a snugness tiebreak. Early bins win unless a later bin fits "
        "much more tightly.",
        "- snug_weight: strength of the tight-fit tiebreak",
        '''import numpy as np

def priority_v2(item, bins_remain_cap):
    snug_weight = {a}
    caps = np.asarray(bins_remain_cap, dtype=float)
    scores = -np.arange(len(caps), dtype=float) - snug_weight * (caps - item)
    scores[caps < item] = -np.inf
    return scores
''',
        (("a", 0.01, 0.4),),
    ),
]

_BANKS = {"tsp": _TSP_VARIANTS, "kp": _KP_VARIANTS, "bpp_online": _BPP_VARIANTS}

_INSIGHT_TEXT = (
    "The stronger heuristic wins because its score couples the immediate cost of a "
    "decision with a cheap estimate of its downstream consequences, so locally "
    "attractive but globally expensive choices get filtered out early. The weaker "
    "variant scores decisions in isolation and pays for it at the end of the "
    "construction, where its earlier commitments leave only bad options.\n\n"
    "The gap also reflects constant calibration: the better heuristic's weights "
    "keep the secondary term small enough not to drown the primary signal. "
    "Retuning the weaker variant's constants toward that regime, or adding a "
    "similar lookahead term with a modest weight, should close most of the gap. "
    "(analysis %s)"
)


def _malformed(h: int) -> bool:
    return h % 11 == 0


def build_script(problem: str):
    """Digest-keyed response function for one problem family."""
    bank = _BANKS[problem]

    def script(messages: list[dict[str, str]], digest: str) -> str:
        h = int(digest[:15], 16)
        if messages and messages[0]["content"] == ANALYST_SYSTEM:
            return _INSIGHT_TEXT % digest[:8]
        if _malformed(h):
            return "I considered several designs but could not settle on an implementation."
        thought, params, template, knobs = bank[h % len(bank)]
        values = {
            name: _jitter(h, slot + 1, lo, hi) for slot, (name, lo, hi) in enumerate(knobs)
        }
        code = template.format(**values)
        return (
            f"[Thought]: {thought}\n"
            f"[KEY PARAMETERS]:\n{params}\n"
            f"[Code]:\n```python\n{code}```\n"
        )

    return script


def build_scripted_transport(problem: str) -> ScriptedTransport:
    return ScriptedTransport(build_script(problem))
