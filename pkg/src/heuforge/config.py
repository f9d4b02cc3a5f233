"""Run configuration: defaults, TOML parsing, dotted overrides, round-trip.

Defaults follow the framework's published hyperparameter table: 6 islands of
8, similarity threshold 0.7, reset stagnation 8, migration cooldown 2,
exploration constant sqrt(2), 3 tuning candidates, sampling temperature 1.0.
Every field is overridable from a config file or ``section.key=value``
strings.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Any, Optional

from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass
class ProblemConfig:
    kind: str = "tsp"
    n: int = 50
    capacity: Optional[float] = None  # kp/bpp only; kp defaults to n/4
    train_count: int = 64
    train_seed: int = 7


@dataclass
class IslandConfig:
    count: int = 6
    population: int = 8
    similarity_threshold: float = 0.7
    reset_stagnation: int = 8
    migration_cooldown: int = 2
    migration_stagnation: int = 3
    tournament_size: int = 2
    parents_k: int = 2
    init_retry_factor: int = 3  # init attempts per island = factor * population


@dataclass
class SchedulerConfig:
    exploration: float = math.sqrt(2.0)


@dataclass
class TunerConfig:
    n_tune: int = 3
    f: float = 0.5
    cr: float = 0.9
    generations: int = 5
    rho: float = 0.5
    near_zero_eps: float = 1e-6
    gate_slack: float = 0.05


@dataclass
class LlmConfig:
    transport: str = "scripted"  # scripted | replay | live
    endpoint: str = ""
    model: str = ""
    temperature: float = 1.0
    transcript_path: str = ""  # replay source
    record_path: str = ""  # append every exchange here when set
    api_key_env: str = "LLM_API_KEY"
    max_retries: int = 3


@dataclass
class RuntimeConfig:
    timeout_ms: int = 30000
    max_parallel: int = 6
    executor: str = "inprocess"  # inprocess | harness
    harness_cmd: str = ""  # shell-split argv for the harness executor
    memory_limit_mb: int = 1024  # guest address-space cap, harness executor only


@dataclass
class BudgetConfig:
    generations: int = 800
    max_evaluations: int = 0  # 0 = unlimited


@dataclass
class RunConfig:
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    islands: IslandConfig = field(default_factory=IslandConfig)
    scheduler: SchedulerConfig = field(default_factory=SchedulerConfig)
    tuner: TunerConfig = field(default_factory=TunerConfig)
    llm: LlmConfig = field(default_factory=LlmConfig)
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)
    budget: BudgetConfig = field(default_factory=BudgetConfig)
    master_seed: int = 0

    def validate(self) -> "RunConfig":
        if self.problem.kind not in ("tsp", "kp", "bpp_online"):
            raise ConfigError(f"unknown problem kind {self.problem.kind!r}")
        if self.problem.n < 1 or self.problem.train_count < 1:
            raise ConfigError("problem size and training count must be >= 1")
        if self.islands.count < 1 or self.islands.population < 1:
            raise ConfigError("need at least one island with one member")
        if not 0.0 <= self.islands.similarity_threshold <= 1.0:
            raise ConfigError("similarity threshold must lie in [0, 1]")
        if self.scheduler.exploration <= 0:
            raise ConfigError("exploration constant must be positive")
        if self.llm.transport not in ("scripted", "replay", "live"):
            raise ConfigError(f"unknown transport {self.llm.transport!r}")
        if self.llm.transport == "replay" and not self.llm.transcript_path:
            raise ConfigError("replay transport needs llm.transcript_path")
        if self.llm.transport == "live" and not self.llm.endpoint:
            raise ConfigError("live transport needs llm.endpoint")
        if self.runtime.executor not in ("inprocess", "harness"):
            raise ConfigError(f"unknown executor {self.runtime.executor!r}")
        if self.runtime.executor == "harness" and not self.runtime.harness_cmd:
            raise ConfigError("harness executor needs runtime.harness_cmd")
        if self.budget.generations < 0:
            raise ConfigError("generation budget must be >= 0")
        return self

    def scale(self) -> dict[str, Any]:
        from .problems.instances import default_scale

        return default_scale(self.problem.kind, self.problem.n, self.problem.capacity)


_SECTIONS = {f.name: f.type for f in fields(RunConfig)}


def _coerce(current: Any, raw: Any) -> Any:
    if isinstance(raw, str) and not isinstance(current, str):
        text = raw.strip()
        if isinstance(current, bool):
            return text.lower() in ("1", "true", "yes", "on")
        if isinstance(current, int) and not isinstance(current, bool):
            return int(text)
        if isinstance(current, float):
            return float(text)
        if current is None:
            if not text:
                return None
            try:
                return float(text)
            except ValueError:
                return text
    return raw


def _apply(config: RunConfig, dotted: str, value: Any) -> None:
    parts = dotted.split(".")
    if len(parts) == 1:
        if parts[0] != "master_seed":
            raise ConfigError(f"unknown top-level key {dotted!r}")
        config.master_seed = int(value)
        return
    if len(parts) != 2:
        raise ConfigError(f"override key must be section.key, got {dotted!r}")
    section_name, key = parts
    section = getattr(config, section_name, None)
    if section is None or not is_dataclass(section):
        raise ConfigError(f"unknown config section {section_name!r}")
    if not hasattr(section, key):
        raise ConfigError(f"unknown key {key!r} in section {section_name!r}")
    setattr(section, key, _coerce(getattr(section, key), value))


def apply_overrides(config: RunConfig, items: list[str]) -> RunConfig:
    """Apply ``section.key=value`` strings in order, then re-validate."""
    for item in items:
        if "=" not in item:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        dotted, _, value = item.partition("=")
        _apply(config, dotted.strip(), value.strip())
    return config.validate()


def from_dict(doc: dict[str, Any]) -> RunConfig:
    config = RunConfig()
    for section_name, payload in doc.items():
        if section_name == "master_seed":
            config.master_seed = int(payload)
            continue
        if not isinstance(payload, dict):
            raise ConfigError(f"section {section_name!r} must be a table")
        for key, value in payload.items():
            _apply(config, f"{section_name}.{key}", value)
    return config.validate()


def load_config(path: str | Path, overrides: list[str] | None = None) -> RunConfig:
    """Parse a TOML config file and apply ``section.key=value`` overrides."""
    try:
        doc = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file does not parse: {exc}") from exc
    config = from_dict(doc) if doc else RunConfig()
    return apply_overrides(config, overrides or [])


def to_dict(config: RunConfig) -> dict[str, Any]:
    doc = asdict(config)
    return doc


def _toml_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    return json.dumps(str(value))


def serialize(config: RunConfig) -> str:
    """Emit the full config (defaults materialized) as TOML.

    ``None`` fields are omitted; TOML has no null and an absent key restores
    the same default on the next parse.
    """
    doc = to_dict(config)
    lines = [f"master_seed = {doc.pop('master_seed')}"]
    for section_name, payload in doc.items():
        lines.append("")
        lines.append(f"[{section_name}]")
        for key, value in payload.items():
            if value is None:
                continue
            lines.append(f"{key} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"
