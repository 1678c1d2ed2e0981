# ---
# File: ctgc/pipeline/models.py
# Purpose: Run configuration (dataset source, condensation, inversion and
#          evaluation settings, output directory), its loader, and the
#          per-stage cache manifest.
# ---

import json
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ctgc.condensation.models import CondenseConfig
from ctgc.errors import InvalidConfig
from ctgc.evaluation.models import EvalConfig, Variant
from ctgc.generation.models import InversionConfig
from ctgc.pipeline.presets import SBM_FIXTURE, get_preset


class Stage(str, Enum):
    DECOMPOSE = "decompose"
    CONDENSE = "condense"
    GENERATE = "generate"
    EVALUATE = "evaluate"


class SbmConfig(BaseModel):
    block_sizes: list[int] = Field(min_length=1)
    p_in: float = Field(ge=0, le=1)
    p_out: float = Field(ge=0, le=1)
    seed: int = Field(default=0, ge=0)
    noise_std: float = Field(default=0.5, ge=0)


class DatasetConfig(BaseModel):
    edges: Path
    features: Path
    labels: Optional[Path] = None

    @field_validator("edges", "features", "labels")
    @classmethod
    def _check_exists(cls, value: Optional[Path]):
        if value is not None and not value.is_file():
            raise ValueError(f"file not found: {value}")
        return value

    def files(self) -> list[Path]:
        return [path for path in (self.edges, self.features, self.labels) if path is not None]


class RunConfig(BaseModel):
    """
    One pipeline run. Exactly one of `dataset` (files on disk) or `sbm`
    (synthetic graph) names the input graph.
    """

    preset: Optional[str] = None
    dataset: Optional[DatasetConfig] = None
    sbm: Optional[SbmConfig] = None
    condense: CondenseConfig
    inversion: InversionConfig = Field(default_factory=InversionConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)
    variant: Variant = Variant.FULL
    out_dir: Path

    @model_validator(mode="after")
    def _check_source(self):
        if (self.dataset is None) == (self.sbm is None):
            raise ValueError("exactly one of 'dataset' or 'sbm' must be given")
        return self

    @property
    def seeds(self) -> list[int]:
        return list(self.eval.seeds)


class StageManifest(BaseModel):
    """Cache record written beside each stage's outputs."""

    stage: Stage
    key: str
    outputs: list[str]


# ---
# Nested dict merge; `override` wins, None values are skipped so unset CLI
# flags leave the file's keys alone.
# ---
def merge_config(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged


def read_config_file(path: Path) -> dict[str, Any]:
    path = Path(path)
    if not path.is_file():
        raise InvalidConfig("Config file not found", {"path": str(path)})
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            payload = yaml.safe_load(text) or {}
        else:
            payload = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise InvalidConfig("Config file is not valid JSON/YAML", {"path": str(path), "reason": str(exc)})
    if not isinstance(payload, dict):
        raise InvalidConfig("Config file must hold a mapping", {"path": str(path)})
    return payload


def _resolve_paths(payload: dict[str, Any], root: Path) -> dict[str, Any]:
    dataset = payload.get("dataset")
    if isinstance(dataset, dict):
        payload["dataset"] = {
            key: str(root / value) if value is not None and not Path(value).is_absolute() else value
            for key, value in dataset.items()
        }
    return payload


def build_run_config(payload: dict[str, Any]) -> RunConfig:
    """
    Validate a raw payload into a RunConfig. The named preset fills
    condensation fields the payload leaves unset; the `sbm` preset also
    supplies the synthetic fixture when no dataset is given.
    """
    payload = dict(payload)
    preset = payload.get("preset")
    payload["condense"] = merge_config(get_preset(preset), payload.get("condense") or {})
    if preset is not None and preset.lower() == "sbm" and payload.get("dataset") is None:
        payload["sbm"] = merge_config(SBM_FIXTURE, payload.get("sbm") or {})
    payload.setdefault("out_dir", str(Path("runs") / (preset or "run")))
    try:
        return RunConfig.model_validate(payload)
    except ValidationError as exc:
        raise InvalidConfig("Invalid run configuration", {"errors": exc.errors(include_url=False, include_context=False)})


def load_run_config(path: Optional[Path] = None, overrides: Optional[dict[str, Any]] = None) -> RunConfig:
    """
    Args:
        path: JSON (or .yaml/.yml) config file; relative dataset paths are
              resolved against its directory
        overrides: Nested CLI overrides, applied on top of the file

    Returns:
        RunConfig
    """
    payload: dict[str, Any] = {}
    if path is not None:
        payload = _resolve_paths(read_config_file(path), Path(path).resolve().parent)
    return build_run_config(merge_config(payload, overrides or {}))
