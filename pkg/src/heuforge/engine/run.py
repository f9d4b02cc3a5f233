"""The full run: setup, generation loop, coordination, persistence.

Islands advance concurrently between generation boundaries; all archive and
telemetry commits happen at the boundary in island order, and every random
draw comes from per-island streams derived from the master seed, so a replay
transport makes whole runs bit-reproducible.  A checkpoint written after each
boundary makes runs resumable.
"""

from __future__ import annotations

import json
import math
import os
import random
import shlex
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .. import __version__
from ..config import RunConfig, from_dict, serialize, to_dict
from ..errors import ConfigError
from ..llm import Gateway, RecordingTransport, ReplayTransport
from ..llm.scripted import build_scripted_transport
from ..problems.instances import generate_instances
from ..runtime import HarnessSupervisor, InEngineExecutor
from .coordination import coordinate_migration, fusion_reset
from .evaluation import CandidateEvaluator
from .islands import init_islands, inner_generation
from .state import GlobalArchive, IslandState
from .telemetry import TelemetryLog

CHECKPOINT_NAME = "checkpoint.json"
TELEMETRY_NAME = "telemetry.jsonl"
MANIFEST_NAME = "manifest.json"
CONFIG_NAME = "config.toml"
BEST_NAME = "best_heuristic.py"


def build_transport(config: RunConfig, run_dir: Path):
    llm = config.llm
    if llm.transport == "scripted":
        transport = build_scripted_transport(config.problem.kind)
    elif llm.transport == "replay":
        transport = ReplayTransport(llm.transcript_path)
    elif llm.transport == "live":
        from ..llm import LiveTransport

        transport = LiveTransport(
            llm.endpoint, llm.model, api_key_env=llm.api_key_env, max_retries=llm.max_retries
        )
    else:  # pragma: no cover - validate() rejects earlier
        raise ConfigError(f"unknown transport {llm.transport!r}")
    if llm.record_path:
        record_path = Path(llm.record_path)
        if not record_path.is_absolute():
            record_path = run_dir / record_path
        transport = RecordingTransport(transport, record_path)
    return transport


def build_executor(config: RunConfig):
    if config.runtime.executor == "harness":
        limit = config.runtime.memory_limit_mb
        return HarnessSupervisor(
            shlex.split(config.runtime.harness_cmd),
            memory_limit_bytes=limit << 20 if limit > 0 else None,
        )
    return InEngineExecutor()


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _rng_state_to_json(rng: random.Random) -> list:
    version, state, gauss = rng.getstate()
    return [version, list(state), gauss]


def _rng_state_from_json(obj: list) -> tuple:
    return (obj[0], tuple(obj[1]), obj[2])


@dataclass
class RunResult:
    run_dir: Path
    archive: GlobalArchive
    islands: list[IslandState]
    evaluations: int
    generations_done: int
    manifest: dict[str, Any]


class Engine:
    """One evolution run bound to a run directory."""

    def __init__(
        self,
        config: RunConfig,
        run_dir: str | Path,
        transport=None,
        executor=None,
    ):
        self.config = config.validate()
        self.run_dir = Path(run_dir)
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self.transport = transport if transport is not None else build_transport(config, self.run_dir)
        self.executor = executor if executor is not None else build_executor(config)
        instances = generate_instances(
            config.problem.kind,
            config.scale(),
            config.problem.train_count,
            config.problem.train_seed,
        )
        self.evaluator = CandidateEvaluator(
            self.executor,
            config.problem.kind,
            instances,
            timeout_ms=config.runtime.timeout_ms,
            max_parallel=config.runtime.max_parallel,
        )
        self.gateway = Gateway(
            self.transport,
            temperature=config.llm.temperature,
            parents_k=config.islands.parents_k,
        )
        self.telemetry = TelemetryLog(self.run_dir / TELEMETRY_NAME)
        self.islands: list[IslandState] = []
        self.archive = GlobalArchive()
        self.rngs: dict[int, random.Random] = {}
        self.evaluations = 0
        self.generation = 0
        self._token_baseline = 0
        self._started = time.time()

    # -- accounting -----------------------------------------------------------

    def _tokens(self) -> int:
        return self._token_baseline + self.transport.meter.total

    def _commit_eval_rows(self, evals: int, tuner_flag: bool) -> None:
        """Advance the evaluation counter and extend the convergence trace."""
        for _ in range(evals):
            self.evaluations += 1
            self.archive.record(self.evaluations)
        if evals:
            self.telemetry.append(
                "convergence",
                {
                    "evaluations": self.evaluations,
                    "best": self.archive.best.objective,
                    "tokens": self._tokens(),
                    "tuned": tuner_flag,
                },
            )

    def _budget_left(self) -> bool:
        limit = self.config.budget.max_evaluations
        return limit <= 0 or self.evaluations < limit

    # -- lifecycle --------------------------------------------------------------

    def initialize(self) -> None:
        (self.run_dir / CONFIG_NAME).write_text(serialize(self.config), encoding="utf-8")
        self.islands, seed, init_evals = init_islands(self.config, self.gateway, self.evaluator)
        self.rngs = {
            island.id: random.Random(f"{self.config.master_seed}:island:{island.id}")
            for island in self.islands
        }
        self.archive.consider(seed)
        self._commit_eval_rows(init_evals, tuner_flag=False)
        self.telemetry.append(
            "init",
            {
                "islands": len(self.islands),
                "population": self.config.islands.population,
                "seed_objective": seed.objective,
                "evaluations": self.evaluations,
            },
        )
        self.checkpoint()

    def run(self) -> RunResult:
        if not self.islands:
            self.initialize()
        while self.generation < self.config.budget.generations and self._budget_left():
            self.generation += 1
            self.step(self.generation)
        return self.finalize()

    def step(self, generation: int) -> None:
        config = self.config
        workers = max(1, min(config.runtime.max_parallel, len(self.islands)))
        if workers == 1 or len(self.islands) == 1:
            outcomes = [
                inner_generation(island, self.gateway, self.evaluator, config, self.rngs[island.id], generation)
                for island in self.islands
            ]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(
                    pool.map(
                        lambda island: inner_generation(
                            island, self.gateway, self.evaluator, config, self.rngs[island.id], generation
                        ),
                        self.islands,
                    )
                )

        # barrier: commit in island order so traces are reproducible
        for island, outcome in zip(self.islands, outcomes):
            improved = False
            if outcome.merged is not None:
                improved = self.archive.consider(outcome.merged)
            self.archive.consider(island.elite)
            self._commit_eval_rows(outcome.evals_used, tuner_flag=improved and outcome.tuned)
            if outcome.tuning is not None:
                self.telemetry.append("tuning", outcome.tuning)
            self.telemetry.append(
                "generation",
                {
                    "island": outcome.island,
                    "generation": generation,
                    "strategy": outcome.strategy,
                    "reward": outcome.reward,
                    "failure": outcome.failure,
                    "accepted": outcome.accepted,
                    "candidate_objective": _json_float(outcome.candidate_objective),
                    "tuned": outcome.tuned,
                    "elite_objective": outcome.elite_objective,
                    "stagnation": outcome.stagnation,
                    "arms": outcome.arms,
                    "evaluations": self.evaluations,
                },
            )

        events, matrix = coordinate_migration(self.islands, generation, self.gateway, config)
        if matrix is not None:
            self.telemetry.append("similarity", {"generation": generation, "matrix": matrix})
        for event in events:
            self.telemetry.append("migration", event.to_json())

        for island in self.islands:
            reset = fusion_reset(island, self.archive, self.gateway, self.evaluator, config, generation)
            if reset is not None:
                self.archive.consider(island.elite)
                self._commit_eval_rows(reset.evals_used, tuner_flag=False)
                self.telemetry.append("reset", reset.to_json())

        self.checkpoint()

    def finalize(self) -> RunResult:
        best = self.archive.best
        assert best is not None
        manifest = {
            "version": __version__,
            "config": to_dict(self.config),
            "started_at": self._started,
            "finished_at": time.time(),
            "generations": self.generation,
            "evaluations": self.evaluations,
            "tokens": {
                "prompt": self.transport.meter.prompt_tokens,
                "completion": self.transport.meter.completion_tokens,
                "total": self._tokens(),
            },
            "best": {"objective": best.objective, "entry": best.entry, "tuned": best.tuned},
        }
        _atomic_write(self.run_dir / MANIFEST_NAME, json.dumps(manifest, indent=2, sort_keys=True))
        _atomic_write(self.run_dir / BEST_NAME, best.code)
        return RunResult(
            run_dir=self.run_dir,
            archive=self.archive,
            islands=self.islands,
            evaluations=self.evaluations,
            generations_done=self.generation,
            manifest=manifest,
        )

    # -- persistence ------------------------------------------------------------

    def checkpoint(self) -> None:
        state = {
            "generation": self.generation,
            "evaluations": self.evaluations,
            "tokens": self._tokens(),
            "archive": self.archive.to_json(),
            "islands": [island.to_json() for island in self.islands],
            "rngs": {str(i): _rng_state_to_json(rng) for i, rng in self.rngs.items()},
            "config": to_dict(self.config),
        }
        _atomic_write(self.run_dir / CHECKPOINT_NAME, json.dumps(state, sort_keys=True))

    @classmethod
    def resume(cls, run_dir: str | Path, transport=None, executor=None) -> "Engine":
        run_dir = Path(run_dir)
        state = json.loads((run_dir / CHECKPOINT_NAME).read_text(encoding="utf-8"))
        config = from_dict(_strip_nulls(state["config"]))
        engine = cls(config, run_dir, transport=transport, executor=executor)
        engine.generation = int(state["generation"])
        engine.evaluations = int(state["evaluations"])
        engine._token_baseline = int(state.get("tokens", 0))
        engine.archive = GlobalArchive.from_json(state["archive"])
        engine.islands = [IslandState.from_json(obj) for obj in state["islands"]]
        engine.rngs = {}
        for key, obj in state["rngs"].items():
            rng = random.Random()
            rng.setstate(_rng_state_from_json(obj))
            engine.rngs[int(key)] = rng
        return engine


def _json_float(value: float):
    if math.isinf(value):
        return None
    return value


def _strip_nulls(doc: dict[str, Any]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in doc.items():
        if isinstance(value, dict):
            out[key] = {k: v for k, v in value.items() if v is not None}
        elif value is not None:
            out[key] = value
    return out


def load_checkpoint(run_dir: str | Path) -> dict[str, Any]:
    return json.loads((Path(run_dir) / CHECKPOINT_NAME).read_text(encoding="utf-8"))


def run_from_config(
    config: RunConfig, run_dir: str | Path, transport=None, executor=None
) -> RunResult:
    return Engine(config, run_dir, transport=transport, executor=executor).run()
