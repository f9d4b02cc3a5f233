"""In-memory registry of evolution runs handled by this service process."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..engine import Engine


@dataclass
class Job:
    run_id: str
    run_dir: Path
    state: str = "running"  # running | done | failed
    generations: int = 0
    evaluations: int = 0
    best_objective: Optional[float] = None
    error: Optional[str] = None
    thread: Optional[threading.Thread] = field(default=None, repr=False)


class JobRegistry:
    def __init__(self, runs_root: Path):
        self.runs_root = runs_root
        self.runs_root.mkdir(parents=True, exist_ok=True)
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()
        self._counter = 0

    def new_run_dir(self, requested: Optional[str]) -> tuple[str, Path]:
        with self._lock:
            self._counter += 1
            run_id = f"run-{self._counter:04d}"
        if requested:
            path = Path(requested)
            if not path.is_absolute():
                path = self.runs_root / path
        else:
            path = self.runs_root / run_id
        return run_id, path

    def execute(self, run_id: str, run_dir: Path, engine: Engine, wait: bool) -> Job:
        job = Job(run_id=run_id, run_dir=run_dir)
        with self._lock:
            self._jobs[run_id] = job

        def work():
            try:
                result = engine.run()
                job.state = "done"
                job.generations = result.generations_done
                job.evaluations = result.evaluations
                job.best_objective = result.archive.best.objective
            except Exception as exc:  # surfaced through the status endpoint
                job.state = "failed"
                job.error = f"{type(exc).__name__}: {exc}"

        if wait:
            work()
        else:
            thread = threading.Thread(target=work, daemon=True)
            job.thread = thread
            thread.start()
        return job

    def get(self, run_id: str) -> Optional[Job]:
        with self._lock:
            return self._jobs.get(run_id)

    def from_disk(self, run_dir: str) -> Optional[Job]:
        """Describe a finished or checkpointed run directory not in memory."""
        path = Path(run_dir)
        if not path.is_absolute():
            path = self.runs_root / path
        manifest = path / "manifest.json"
        checkpoint = path / "checkpoint.json"
        if manifest.exists():
            doc = json.loads(manifest.read_text(encoding="utf-8"))
            return Job(
                run_id=str(run_dir),
                run_dir=path,
                state="done",
                generations=int(doc.get("generations", 0)),
                evaluations=int(doc.get("evaluations", 0)),
                best_objective=doc.get("best", {}).get("objective"),
            )
        if checkpoint.exists():
            doc = json.loads(checkpoint.read_text(encoding="utf-8"))
            best = (doc.get("archive") or {}).get("best") or {}
            return Job(
                run_id=str(run_dir),
                run_dir=path,
                state="checkpointed",
                generations=int(doc.get("generation", 0)),
                evaluations=int(doc.get("evaluations", 0)),
                best_objective=best.get("objective"),
            )
        return None
