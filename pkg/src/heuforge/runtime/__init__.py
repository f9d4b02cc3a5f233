"""Safe execution of candidate heuristic source.

Two interchangeable executors serve the engine: an in-engine one that forks a
worker per batch and evaluates with the built-in drivers, and a supervisor
that spawns an external guest harness and speaks the newline-delimited JSON
protocol.  Both enforce wall-clock timeouts and classify failures into
fitness-relevant error kinds.
"""

from .protocol import (
    ERROR_KINDS,
    ExecutionError,
    ExecutionRequest,
    ExecutionResult,
    decode_request,
    decode_result,
    encode_request,
    encode_result,
)
from .local import InEngineExecutor
from .supervisor import HarnessSupervisor
from .classify import classify_failure, result_fitness

__all__ = [
    "ExecutionRequest",
    "ExecutionResult",
    "ExecutionError",
    "ERROR_KINDS",
    "encode_request",
    "decode_request",
    "encode_result",
    "decode_result",
    "InEngineExecutor",
    "HarnessSupervisor",
    "classify_failure",
    "result_fitness",
]
