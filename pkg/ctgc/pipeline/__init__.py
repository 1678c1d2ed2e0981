# ---
# File: ctgc/pipeline/__init__.py
# Purpose: Run configuration and cached stage orchestration behind the CLI
# ---

from ctgc.pipeline.models import DatasetConfig, RunConfig, SbmConfig, Stage, StageManifest, build_run_config, load_run_config
from ctgc.pipeline.pipeline_services import PipelineService
from ctgc.pipeline.presets import PRESETS, SBM_FIXTURE, get_preset

__all__ = [
    "DatasetConfig",
    "PRESETS",
    "PipelineService",
    "RunConfig",
    "SBM_FIXTURE",
    "SbmConfig",
    "Stage",
    "StageManifest",
    "build_run_config",
    "get_preset",
    "load_run_config",
]
