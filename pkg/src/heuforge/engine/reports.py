"""Trace exports derived from a run's telemetry.

Three CSV families: the convergence curve (evaluations, best, tokens, tuned
flag), one structural-similarity matrix per migration epoch, and per-arm
scheduler statistics for every generation slot.
"""

from __future__ import annotations

from pathlib import Path

from ..errors import MissingTelemetry
from ..llm.context import GENERATION_STRATEGIES
from .run import TELEMETRY_NAME
from .telemetry import read_telemetry


def build_reports(run_dir: str | Path) -> dict[str, str]:
    run_dir = Path(run_dir)
    telemetry_path = run_dir / TELEMETRY_NAME
    if not telemetry_path.exists():
        raise MissingTelemetry(f"no telemetry at {telemetry_path}")
    rows = read_telemetry(telemetry_path)

    files: dict[str, str] = {}

    convergence = ["evaluations,best,tokens,tuned"]
    for row in rows:
        if row["type"] == "convergence":
            convergence.append(
                f"{row['evaluations']},{row['best']!r},{row['tokens']},{int(row['tuned'])}"
            )
    files["convergence.csv"] = "\n".join(convergence) + "\n"

    for row in rows:
        if row["type"] == "similarity":
            lines = [",".join(f"{value:.6f}" for value in matrix_row) for matrix_row in row["matrix"]]
            files[f"similarity_g{row['generation']}.csv"] = "\n".join(lines) + "\n"

    arm_tags = [s.value for s in GENERATION_STRATEGIES]
    header = "island,generation,selected," + ",".join(
        f"{tag}_q,{tag}_n" for tag in arm_tags
    )
    arms = [header]
    for row in rows:
        if row["type"] == "generation":
            cells = [str(row["island"]), str(row["generation"]), row["strategy"]]
            for tag in arm_tags:
                stats = row["arms"].get(tag, {"q": 0.0, "n": 0})
                cells.append(repr(stats["q"]))
                cells.append(str(stats["n"]))
            arms.append(",".join(cells))
    files["arms.csv"] = "\n".join(arms) + "\n"
    return files


def write_reports(run_dir: str | Path, out_dir: str | Path | None = None) -> dict[str, Path]:
    run_dir = Path(run_dir)
    target = Path(out_dir) if out_dir else run_dir / "reports"
    target.mkdir(parents=True, exist_ok=True)
    written = {}
    for name, content in build_reports(run_dir).items():
        path = target / name
        path.write_text(content, encoding="utf-8")
        written[name] = path
    return written
