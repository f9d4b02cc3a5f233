"""Exception types shared across the package."""


class HeuforgeError(Exception):
    """Base class for all package-specific errors."""


class ParseError(HeuforgeError):
    """Candidate source does not parse; the candidate must be discarded."""


class EmptyPopulation(HeuforgeError):
    """A population-level similarity was requested for an empty population."""


class InvalidScale(HeuforgeError):
    """Instance generator received a nonpositive or nonsensical scale."""


class CandidateError(HeuforgeError):
    """A candidate policy made an illegal move (infeasible/out-of-range/raised)."""


class TooLarge(HeuforgeError):
    """Exact oracle requested beyond its tractable size."""


class ArityError(HeuforgeError):
    """Prompt context does not match the strategy's parent arity."""


class TransportError(HeuforgeError):
    """LLM transport failed after bounded retries."""


class ReplayMiss(HeuforgeError):
    """No recorded response for the request digest."""

    def __init__(self, digest: str):
        super().__init__(f"no recorded response for digest {digest}")
        self.digest = digest


class PopulationTooSmall(HeuforgeError):
    """Differential mutation needs at least four vectors."""


class SeedInvalid(HeuforgeError):
    """The warm-start seed heuristic failed its own evaluation."""


class MissingTelemetry(HeuforgeError):
    """A report was requested for a run directory without telemetry."""


class ConfigError(HeuforgeError):
    """Run configuration failed to parse or validate."""
