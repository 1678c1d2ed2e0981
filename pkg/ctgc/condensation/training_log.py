# ---
# File: ctgc/condensation/training_log.py
# Purpose: JSON-lines training log, one object per optimization phase
# ---

import json
from pathlib import Path
from typing import Optional

from ctgc.condensation.models import PhaseRecord


class TrainingLog:
    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path is not None else None
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text("", encoding="utf-8")

    def write(self, record: PhaseRecord) -> None:
        if self.path is None:
            return
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record.log_line()) + "\n")


def read_training_log(path: Path) -> list[dict]:
    with open(path, "r", encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]
