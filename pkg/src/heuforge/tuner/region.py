"""Per-parameter search bounds around the initial values."""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_PROPORTIONAL_HALF_WIDTH = 0.5
DEFAULT_NEAR_ZERO_EPS = 1e-6
NEAR_ZERO_BOUND = 1.0


@dataclass(frozen=True)
class TrustRegion:
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        for lo, hi in zip(self.lower, self.upper):
            if not lo < hi:
                raise ValueError(f"degenerate trust region bound [{lo}, {hi}]")

    @property
    def dims(self) -> int:
        return len(self.lower)

    def widths(self) -> tuple[float, ...]:
        return tuple(hi - lo for lo, hi in zip(self.lower, self.upper))

    def clip(self, vector) -> tuple[float, ...]:
        return tuple(
            min(max(v, lo), hi) for v, lo, hi in zip(vector, self.lower, self.upper)
        )

    def contains(self, vector) -> bool:
        return all(lo <= v <= hi for v, lo, hi in zip(vector, self.lower, self.upper))


def build_trust_region(
    x_init,
    rho: float = DEFAULT_PROPORTIONAL_HALF_WIDTH,
    near_zero_eps: float = DEFAULT_NEAR_ZERO_EPS,
) -> TrustRegion:
    """Magnitude-proportional bounds, with a constant range near zero.

    ``|x| >= eps``: bounds are ``x -/+ rho * |x|``; otherwise a fixed
    ``[-1, 1]`` keeps the search volume workable.
    """
    lower, upper = [], []
    for x in x_init:
        if abs(x) >= near_zero_eps:
            half = rho * abs(x)
            lower.append(x - half)
            upper.append(x + half)
        else:
            lower.append(-NEAR_ZERO_BOUND)
            upper.append(NEAR_ZERO_BOUND)
    return TrustRegion(tuple(lower), tuple(upper))
