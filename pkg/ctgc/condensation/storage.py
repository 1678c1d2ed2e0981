# ---
# File: ctgc/condensation/storage.py
# Purpose: Condensation state on disk (state.json). Floats are written with
#          their shortest round-trip repr so reloads are exact.
# ---

import json
from pathlib import Path

from pydantic import ValidationError

from ctgc.condensation.models import CondensationState
from ctgc.errors import FormatError


def save_state(path: Path, state: CondensationState) -> None:
    payload = {
        "h_cent": state.h_cent.tolist(),
        "z_cent": None if state.z_cent is None else state.z_cent.tolist(),
        "y_h": state.y_h.tolist(),
        "y_z": state.y_z.tolist(),
        "matching_rate_history": state.matching_rate_history,
        "total_losses": state.total_losses,
        "phases": [record.model_dump(mode="json") for record in state.phases],
        "selected_iteration": state.selected_iteration,
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")


def load_state(path: Path) -> CondensationState:
    path = Path(path)
    if not path.is_file():
        raise FormatError("Missing artifact file", {"file": str(path)})
    try:
        return CondensationState.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, ValidationError) as exc:
        raise FormatError("Unreadable condensation state", {"file": str(path), "reason": str(exc)})
