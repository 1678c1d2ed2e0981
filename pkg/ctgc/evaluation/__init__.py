# ---
# File: ctgc/evaluation/__init__.py
# Purpose: Downstream evaluation protocol, coreset baselines and ablations
# ---

from ctgc.evaluation.ablation import apply_variant, condense_graph, decompose_graph, run_ablation, train_relays
from ctgc.evaluation.baselines import coreset_graph, kcenter_coreset, random_coreset
from ctgc.evaluation.downstream import embed, train_downstream
from ctgc.evaluation.harness import evaluate_condensed, evaluate_extractor, evaluate_relay
from ctgc.evaluation.models import EvalConfig, EvalReport, FewShotSplit, Task, TaskSummary, Variant
from ctgc.evaluation.tasks import eval_clustering, eval_lp, eval_nc_fewshot, nmi

__all__ = [
    "EvalConfig",
    "EvalReport",
    "FewShotSplit",
    "Task",
    "TaskSummary",
    "Variant",
    "apply_variant",
    "condense_graph",
    "coreset_graph",
    "decompose_graph",
    "embed",
    "eval_clustering",
    "eval_lp",
    "eval_nc_fewshot",
    "evaluate_condensed",
    "evaluate_extractor",
    "evaluate_relay",
    "kcenter_coreset",
    "nmi",
    "random_coreset",
    "run_ablation",
    "train_downstream",
    "train_relays",
]
