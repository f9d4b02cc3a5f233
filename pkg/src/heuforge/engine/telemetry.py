"""Append-only JSON-lines telemetry for runs.

Rows are typed by a ``type`` field and serialized with sorted keys and no
timestamps, so two replayed runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any


class TelemetryLog:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, row_type: str, payload: dict[str, Any]) -> None:
        row = {"type": row_type, **payload}
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def read_telemetry(path: str | Path) -> list[dict[str, Any]]:
    rows = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows
