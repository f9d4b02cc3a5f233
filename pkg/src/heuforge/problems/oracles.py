"""Exact optima and bounds at desk scale.

TSP uses the Held-Karp subset dynamic program (exact, n <= 14).  Knapsack uses
depth-first branch and bound with the fractional relaxation as upper bound
(exact, n <= 200).  Online bin packing gets the ceil(sum/capacity) lower
bound, which every feasible packing must respect.
"""

from __future__ import annotations

import math

from ..errors import TooLarge
from .instances import BppStream, Instance, KpInstance, TspInstance

TSP_ORACLE_MAX_N = 14
KP_ORACLE_MAX_N = 200


def tsp_oracle(instance: TspInstance) -> float:
    n = instance.n
    if n > TSP_ORACLE_MAX_N:
        raise TooLarge(f"exact TSP oracle supports n <= {TSP_ORACLE_MAX_N}, got {n}")
    if n <= 2:
        return 0.0 if n == 1 else 2.0 * float(instance.dist[0][1])
    d = instance.dist.tolist()
    m = n - 1  # nodes 1..n-1; tours start and end at node 0
    full = 1 << m
    inf = math.inf
    dp = [[inf] * m for _ in range(full)]
    for j in range(m):
        dp[1 << j][j] = d[0][j + 1]
    for subset in range(full):
        row = dp[subset]
        for j in range(m):
            base = row[j]
            if base == inf or not subset & (1 << j):
                continue
            dj = d[j + 1]
            for k in range(m):
                if subset & (1 << k):
                    continue
                nxt = subset | (1 << k)
                cand = base + dj[k + 1]
                if cand < dp[nxt][k]:
                    dp[nxt][k] = cand
    last = dp[full - 1]
    return min(last[j] + d[j + 1][0] for j in range(m))


def kp_oracle(instance: KpInstance) -> float:
    n = instance.n
    if n > KP_ORACLE_MAX_N:
        raise TooLarge(f"exact knapsack oracle supports n <= {KP_ORACLE_MAX_N}, got {n}")
    order = sorted(range(n), key=lambda i: -instance.values[i] / instance.weights[i])
    values = [float(instance.values[i]) for i in order]
    weights = [float(instance.weights[i]) for i in order]
    capacity = float(instance.capacity)

    # suffix fractional bound: greedy fill in density order
    def bound(idx: int, room: float) -> float:
        total = 0.0
        for i in range(idx, n):
            if weights[i] <= room:
                room -= weights[i]
                total += values[i]
            else:
                total += values[i] * (room / weights[i])
                break
        return total

    best = 0.0
    stack = [(0, capacity, 0.0)]
    while stack:
        idx, room, value = stack.pop()
        if value > best:
            best = value
        if idx == n or value + bound(idx, room) <= best:
            continue
        # explore taking the item first so good solutions surface early
        stack.append((idx + 1, room, value))
        if weights[idx] <= room:
            stack.append((idx + 1, room - weights[idx], value + values[idx]))
    return best


def bpp_lower_bound(stream: BppStream) -> float:
    return float(math.ceil(int(stream.sizes.sum()) / stream.capacity))


def oracle(problem: str, instance: Instance) -> float:
    """Optimal value for TSP/KP; a valid lower bound for online bin packing."""
    if problem == "tsp":
        assert isinstance(instance, TspInstance)
        return tsp_oracle(instance)
    if problem == "kp":
        assert isinstance(instance, KpInstance)
        return kp_oracle(instance)
    if problem == "bpp_online":
        assert isinstance(instance, BppStream)
        return bpp_lower_bound(instance)
    raise ValueError(f"unknown problem kind {problem!r}")
