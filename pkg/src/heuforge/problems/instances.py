"""Instance types, seeded generators, and the instance-set file format.

Generation is deterministic per (kind, scale, count, seed).  TSP points are
uniform on the unit square; knapsack values and weights are uniform on (0, 1];
bin-packing item sizes follow a Weibull(shape=3, scale=45) draw rounded up and
clipped into [1, capacity], the convention of the packing benchmarks this
mirrors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence, Union

import numpy as np

from ..errors import InvalidScale

WEIBULL_SHAPE = 3.0
WEIBULL_SCALE = 45.0

PROBLEM_KINDS = ("tsp", "kp", "bpp_online")


@dataclass(frozen=True, eq=False)
class TspInstance:
    coords: np.ndarray  # (n, 2) points in the unit square
    dist: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.dist is None:
            diff = self.coords[:, None, :] - self.coords[None, :, :]
            object.__setattr__(self, "dist", np.sqrt((diff**2).sum(axis=2)))

    @property
    def n(self) -> int:
        return len(self.coords)


@dataclass(frozen=True, eq=False)
class KpInstance:
    values: np.ndarray
    weights: np.ndarray
    capacity: float

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class BppStream:
    sizes: np.ndarray  # integer sizes in [1, capacity], arrival order fixed
    capacity: int

    @property
    def n(self) -> int:
        return len(self.sizes)


Instance = Union[TspInstance, KpInstance, BppStream]


def default_scale(problem: str, n: int, capacity: float | None = None) -> dict[str, Any]:
    if problem == "tsp":
        return {"n": n}
    if problem == "kp":
        return {"n": n, "capacity": capacity if capacity is not None else n / 4.0}
    if problem == "bpp_online":
        return {"n": n, "capacity": int(capacity) if capacity is not None else 100}
    raise InvalidScale(f"unknown problem kind {problem!r}")


def generate_instances(
    problem: str, scale: dict[str, Any], count: int, seed: int
) -> list[Instance]:
    """Draw ``count`` instances of the given kind, reproducibly for a seed."""
    if count < 1:
        raise InvalidScale("count must be >= 1")
    n = int(scale.get("n", 0))
    if n < 1:
        raise InvalidScale("instance size n must be >= 1")
    rng = np.random.default_rng(seed)

    if problem == "tsp":
        return [TspInstance(coords=rng.random((n, 2))) for _ in range(count)]

    if problem == "kp":
        capacity = float(scale.get("capacity", n / 4.0))
        if capacity <= 0:
            raise InvalidScale("knapsack capacity must be positive")
        out = []
        for _ in range(count):
            values = 1.0 - rng.random(n)  # uniform on (0, 1]
            weights = 1.0 - rng.random(n)
            out.append(KpInstance(values=values, weights=weights, capacity=capacity))
        return out

    if problem == "bpp_online":
        capacity = int(scale.get("capacity", 100))
        if capacity < 1:
            raise InvalidScale("bin capacity must be >= 1")
        out = []
        for _ in range(count):
            raw = rng.weibull(WEIBULL_SHAPE, n) * WEIBULL_SCALE
            sizes = np.clip(np.ceil(raw), 1, capacity).astype(np.int64)
            out.append(BppStream(sizes=sizes, capacity=capacity))
        return out

    raise InvalidScale(f"unknown problem kind {problem!r}")


# -- JSON (de)serialization: shared by instance files and the wire protocol --


def instance_to_json(instance: Instance) -> dict[str, Any]:
    if isinstance(instance, TspInstance):
        return {"coords": instance.coords.tolist()}
    if isinstance(instance, KpInstance):
        return {
            "values": instance.values.tolist(),
            "weights": instance.weights.tolist(),
            "capacity": instance.capacity,
        }
    if isinstance(instance, BppStream):
        return {"sizes": instance.sizes.tolist(), "capacity": instance.capacity}
    raise TypeError(f"not an instance: {instance!r}")


def parse_instance(problem: str, obj: dict[str, Any]) -> Instance:
    if problem == "tsp":
        return TspInstance(coords=np.asarray(obj["coords"], dtype=float))
    if problem == "kp":
        return KpInstance(
            values=np.asarray(obj["values"], dtype=float),
            weights=np.asarray(obj["weights"], dtype=float),
            capacity=float(obj["capacity"]),
        )
    if problem == "bpp_online":
        return BppStream(
            sizes=np.asarray(obj["sizes"], dtype=np.int64),
            capacity=int(obj["capacity"]),
        )
    raise InvalidScale(f"unknown problem kind {problem!r}")


def instance_set_to_json(
    problem: str, scale: dict[str, Any], seed: int, instances: Sequence[Instance]
) -> dict[str, Any]:
    return {
        "kind": problem,
        "scale": scale,
        "seed": seed,
        "instances": [instance_to_json(inst) for inst in instances],
    }


def instances_from_json(doc: dict[str, Any]) -> tuple[str, list[Instance]]:
    problem = doc["kind"]
    return problem, [parse_instance(problem, obj) for obj in doc["instances"]]


def save_instance_set(
    path: str | Path,
    problem: str,
    scale: dict[str, Any],
    seed: int,
    instances: Sequence[Instance],
) -> None:
    Path(path).write_text(
        json.dumps(instance_set_to_json(problem, scale, seed, instances)),
        encoding="utf-8",
    )


def load_instance_set(path: str | Path) -> tuple[str, list[Instance]]:
    return instances_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
