# ---
# File: ctgc/evaluation/harness.py
# Purpose: Run the requested downstream tasks over a list of seeds and
#          summarize them into an EvalReport.
# ---

import logging
from typing import Any, Callable, Optional

from ctgc.errors import InvalidConfig
from ctgc.evaluation.downstream import embed, train_downstream
from ctgc.evaluation.models import EvalConfig, EvalReport, Task, TaskSummary
from ctgc.evaluation.tasks import eval_clustering, eval_lp, eval_nc_fewshot
from ctgc.generation.models import CondensedGraph
from ctgc.graph.models import LinkSplit, SparseGraph
from ctgc.relay.models import GcnParams

logger = logging.getLogger(__name__)

# seed -> frozen feature extractor
ExtractorFactory = Callable[[int], GcnParams]


def evaluate_extractor(
    extractor_for_seed: ExtractorFactory,
    graph: SparseGraph,
    cfg: EvalConfig,
    split: Optional[LinkSplit] = None,
    config_echo: Optional[dict[str, Any]] = None,
) -> EvalReport:
    """
    Score frozen extractors on the original graph.

    NC and CL embed the full graph; LP embeds the split's message graph so
    held-out edges never reach message passing.
    """
    tasks = set(cfg.tasks)
    if (Task.NC in tasks or Task.CL in tasks) and graph.labels is None:
        raise InvalidConfig("Node classification and clustering need node labels")
    if Task.LP in tasks and split is None:
        raise InvalidConfig("Link prediction needs a link split")

    nc_scores: dict[int, list[float]] = {shots: [] for shots in cfg.shots}
    lp_scores: list[float] = []
    cl_scores: list[float] = []
    for seed in cfg.seeds:
        model = extractor_for_seed(seed)
        if Task.NC in tasks or Task.CL in tasks:
            emb = embed(model, graph)
            if Task.NC in tasks:
                for shots in cfg.shots:
                    nc_scores[shots].append(eval_nc_fewshot(emb, graph.labels, shots, cfg.head_epochs, seed, cfg.head_lr))
            if Task.CL in tasks:
                cl_scores.append(eval_clustering(emb, graph.labels, seed))
        if Task.LP in tasks:
            lp_emb = embed(model, split.message_graph)
            lp_scores.append(eval_lp(lp_emb, split, cfg.head_epochs, seed, cfg.head_lr, cfg.lp_eval_every))

    report = EvalReport(
        nc={str(shots): TaskSummary.from_scores(scores) for shots, scores in nc_scores.items()} if Task.NC in tasks else None,
        lp=TaskSummary.from_scores(lp_scores) if Task.LP in tasks else None,
        cl=TaskSummary.from_scores(cl_scores) if Task.CL in tasks else None,
        seeds=list(cfg.seeds),
        config={**(config_echo or {}), "eval": cfg.model_dump(mode="json")},
    )
    _log_report(report)
    return report


def evaluate_condensed(
    cg: CondensedGraph,
    graph: SparseGraph,
    cfg: EvalConfig,
    split: Optional[LinkSplit] = None,
    config_echo: Optional[dict[str, Any]] = None,
) -> EvalReport:
    """Downstream model trained on the condensed graph per seed, then frozen."""

    def extractor(seed: int) -> GcnParams:
        return train_downstream(cg, cfg.arch, cfg.downstream_epochs, cfg.downstream_lr, seed, cfg.hidden_dim).params

    return evaluate_extractor(extractor, graph, cfg, split, config_echo)


def evaluate_relay(
    relay: GcnParams,
    graph: SparseGraph,
    cfg: EvalConfig,
    split: Optional[LinkSplit] = None,
    config_echo: Optional[dict[str, Any]] = None,
) -> EvalReport:
    """The trained semantic relay model itself as the extractor; only the heads vary by seed."""
    return evaluate_extractor(lambda seed: relay, graph, cfg, split, {**(config_echo or {}), "extractor": "relay"})


def _log_report(report: EvalReport) -> None:
    if report.nc:
        for shots, summary in report.nc.items():
            logger.info("[EVAL] ✓ NC %s-shot | accuracy: %.4f ± %.4f", shots, summary.mean, summary.std)
    if report.lp:
        logger.info("[EVAL] ✓ LP | AUC: %.4f ± %.4f", report.lp.mean, report.lp.std)
    if report.cl:
        logger.info("[EVAL] ✓ CL | NMI: %.4f ± %.4f", report.cl.mean, report.cl.std)
