"""Evaluation loops for the three supported problems.

These deliberately mirror the engine-side drivers line for line in semantics:
feasibility is checked on every step, and a candidate that makes an illegal
move raises :class:`InfeasibleMove`.  Equivalence against the engine's
evaluators is pinned by the acceptance tests.
"""

from __future__ import annotations

import numpy as np


class InfeasibleMove(Exception):
    """Candidate selected an illegal action."""


def drive_tsp(policy, obj: dict, start: int = 0) -> float:
    coords = np.asarray(obj["coords"], dtype=float)
    n = len(coords)
    if n == 1:
        return 0.0
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    unvisited = set(range(n))
    unvisited.discard(start)
    current = start
    total = 0.0
    while unvisited:
        chosen = policy(current, start, set(unvisited), dist)
        try:
            nxt = int(chosen)
        except (TypeError, ValueError):
            raise InfeasibleMove(f"policy returned a non-node: {chosen!r}") from None
        if nxt not in unvisited:
            raise InfeasibleMove(f"policy selected invalid node {nxt}")
        total += float(dist[current][nxt])
        unvisited.discard(nxt)
        current = nxt
    total += float(dist[current][start])
    return total


def drive_kp(policy, obj: dict) -> float:
    values = np.asarray(obj["values"], dtype=float)
    weights = np.asarray(obj["weights"], dtype=float)
    remaining = float(obj["capacity"])
    alive = list(range(len(values)))
    total = 0.0
    while alive:
        sub_w = weights[alive]
        if not bool(np.any(sub_w <= remaining)):
            break
        sub_v = values[alive]
        chosen = policy(remaining, sub_v.copy(), sub_w.copy())
        try:
            idx = int(chosen)
        except (TypeError, ValueError):
            raise InfeasibleMove(f"policy returned a non-index: {chosen!r}") from None
        if not 0 <= idx < len(alive):
            raise InfeasibleMove(f"item index {idx} out of range")
        if float(sub_w[idx]) > remaining:
            raise InfeasibleMove("policy selected an item exceeding capacity")
        total += float(sub_v[idx])
        remaining -= float(sub_w[idx])
        alive.pop(idx)
    return total


def drive_bpp(policy, obj: dict) -> float:
    capacity = int(obj["capacity"])
    sizes = [int(s) for s in obj["sizes"]]
    caps: list[float] = []
    for raw_size in sizes:
        size = float(raw_size)
        chosen = None
        if caps and any(c >= size for c in caps):
            raw = policy(size, np.array(caps, dtype=float))
            try:
                priorities = np.asarray(raw, dtype=float)
            except (TypeError, ValueError):
                raise InfeasibleMove("policy returned a malformed priority vector") from None
            if priorities.shape != (len(caps),):
                raise InfeasibleMove(
                    f"priority vector has shape {priorities.shape}, expected ({len(caps)},)"
                )
            if bool(np.isnan(priorities).any()):
                raise InfeasibleMove("priority vector contains NaN")
            if not bool(np.all(np.isneginf(priorities))):
                idx = int(np.argmax(priorities))
                if caps[idx] < size:
                    raise InfeasibleMove("policy placed an item into a full bin")
                chosen = idx
        if chosen is None:
            caps.append(capacity - size)
        else:
            caps[chosen] -= size
    return float(len(caps))


DRIVERS = {"tsp": drive_tsp, "kp": drive_kp, "bpp_online": drive_bpp}
