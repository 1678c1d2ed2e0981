# ---
# File: ctgc/pipeline/pipeline_services.py
# Purpose: Stage orchestration for the CLI: decompose, condense, generate,
#          evaluate, plus coreset baselines, statistics and α sweeps. Each
#          stage is cached under the run's output directory by a content
#          hash of its configuration and upstream artifacts.
# ---

import json
import logging
from pathlib import Path
from typing import Optional

from ctgc.condensation.models import CondenseConfig
from ctgc.condensation.storage import load_state, save_state
from ctgc.errors import CTGCError, InvalidConfig
from ctgc.evaluation.ablation import apply_variant, decompose_graph, feature_scale, train_relays
from ctgc.evaluation.baselines import coreset_graph, kcenter_coreset, random_coreset
from ctgc.evaluation.downstream import embed
from ctgc.evaluation.harness import evaluate_condensed, evaluate_relay
from ctgc.evaluation.models import Task
from ctgc.generation.storage import load_condensed, save_condensed
from ctgc.generation.statistics import condensed_statistics, original_statistics
from ctgc.generation.synthesis import Structure, generate_condensed
from ctgc.graph.generators import generate_sbm
from ctgc.graph.io import load_graph, save_graph
from ctgc.graph.models import LinkSplit, SparseGraph
from ctgc.graph.splits import split_links
from ctgc.pipeline.models import RunConfig, SbmConfig, Stage, StageManifest
from ctgc.pipeline.presets import SBM_FIXTURE, SWEEP_ALPHAS
from ctgc.relay.checkpoint import load_checkpoint, save_checkpoint
from ctgc.spectral.io import load_eigensystem, save_eigensystem
from ctgc.utils.hash import combine_hashes, hash_directory, hash_file, hash_payload

logger = logging.getLogger(__name__)

EIGEN_FILE = "eigensystem.ctge"
SEMANTIC_FILE = "semantic.ctgm"
STRUCTURAL_FILE = "structural.ctgm"
STATE_FILE = "state.json"
TRAINING_LOG_FILE = "training_log.jsonl"
CONDENSED_DIR = "condensed"
REPORT_FILE = "report.json"
RELAY_REPORT_FILE = "relay_report.json"
STATS_FILE = "stats.json"
SWEEP_FILE = "sweep.json"
MANIFEST_DIR = "manifests"
FAILURE_SUFFIX = ".failed.json"

BASELINE_METHODS = ("kcenter", "random")


# ---
# Cache bookkeeping. A stage is a hit when its manifest carries the same key
# and every listed output still exists.
# ---
def _manifest_path(out_dir: Path, name: str) -> Path:
    return Path(out_dir) / MANIFEST_DIR / f"{name}.json"


def _is_cached(out_dir: Path, name: str, key: str) -> bool:
    path = _manifest_path(out_dir, name)
    if not path.is_file():
        return False
    try:
        manifest = StageManifest.model_validate_json(path.read_text(encoding="utf-8"))
    except ValueError:
        return False
    return manifest.key == key and all((Path(out_dir) / output).exists() for output in manifest.outputs)


def _record(out_dir: Path, name: str, stage: Stage, key: str, outputs: list[str]) -> None:
    path = _manifest_path(out_dir, name)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(StageManifest(stage=stage, key=key, outputs=outputs).model_dump_json(indent=2), encoding="utf-8")


def _write_failure(out_dir: Path, stage: Stage, exc: CTGCError) -> None:
    marker = Path(out_dir) / f"{stage.value}{FAILURE_SUFFIX}"
    marker.write_text(
        json.dumps({"stage": stage.value, "error": type(exc).__name__, "message": exc.message, "details": exc.details},
                   indent=2, sort_keys=True, default=str),
        encoding="utf-8",
    )
    logger.error("[PIPELINE] ✗ Stage failed | stage: %s | marker: %s", stage.value, marker)


def _clear_failure(out_dir: Path, stage: Stage) -> None:
    (Path(out_dir) / f"{stage.value}{FAILURE_SUFFIX}").unlink(missing_ok=True)


# ---
# Service class for the staged pipeline. Every stage reads its inputs from
# the run's output directory, so stages can be invoked one at a time from
# the CLI or chained by run().
# ---
class PipelineService:

    # ---
    # Input graph, link split and the label-free condensation source
    # ---
    @staticmethod
    def load_dataset(run: RunConfig) -> SparseGraph:
        if run.sbm is not None:
            sbm = run.sbm
            return generate_sbm(sbm.block_sizes, sbm.p_in, sbm.p_out, sbm.seed, sbm.noise_std)
        return load_graph(run.dataset.edges, run.dataset.features, run.dataset.labels)

    @staticmethod
    def dataset_key(run: RunConfig) -> str:
        if run.sbm is not None:
            return hash_payload({"sbm": run.sbm.model_dump()})
        return combine_hashes(hash_file(path) for path in run.dataset.files())

    @staticmethod
    def link_split(run: RunConfig, graph: SparseGraph) -> Optional[LinkSplit]:
        if Task.LP not in run.eval.tasks:
            return None
        return split_links(graph, run.condense.seed)

    # ---
    # The message graph of the link split when LP is requested, otherwise
    # the full graph; labels are always stripped before condensation.
    # ---
    @staticmethod
    def condensation_source(run: RunConfig, graph: SparseGraph, split: Optional[LinkSplit]) -> SparseGraph:
        source = split.message_graph if split is not None else graph
        return source.without_labels()

    @staticmethod
    def source_key(run: RunConfig) -> str:
        lp = Task.LP in run.eval.tasks
        return combine_hashes([PipelineService.dataset_key(run), hash_payload({"lp": lp, "split_seed": run.condense.seed})])

    @staticmethod
    def arm(run: RunConfig) -> tuple[CondenseConfig, Structure]:
        return apply_variant(run.condense, run.variant)

    # ---
    # Stage 1: extremal eigenpairs of the source Laplacian, K₁ smallest and
    # K₂ largest, written as a CTGE file.
    # ---
    @staticmethod
    def decompose(run: RunConfig, force: bool = False) -> Path:
        out_dir = Path(run.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        key = combine_hashes([
            PipelineService.source_key(run),
            hash_payload({"n_prime": run.condense.n_prime, "seed": run.condense.seed}),
        ])
        target = out_dir / EIGEN_FILE
        if not force and _is_cached(out_dir, Stage.DECOMPOSE.value, key):
            logger.info("[PIPELINE] ✓ Cache hit | stage: decompose | file: %s", target)
            return target

        graph = PipelineService.load_dataset(run)
        source = PipelineService.condensation_source(run, graph, PipelineService.link_split(run, graph))
        eig = decompose_graph(source, run.condense)
        save_eigensystem(target, eig)
        _record(out_dir, Stage.DECOMPOSE.value, Stage.DECOMPOSE, key, [EIGEN_FILE])
        logger.info("[PIPELINE] ✓ Eigensystem written | file: %s | smallest: %d | largest: %d", target, eig.k1, eig.k2)
        return target

    # ---
    # Stage 2: pretraining and alternating optimization. Writes both relay
    # checkpoints, the condensation state and the JSONL training log.
    # ---
    @staticmethod
    def condense(run: RunConfig, force: bool = False) -> Path:
        out_dir = Path(run.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        cfg, _ = PipelineService.arm(run)
        eig_path = out_dir / EIGEN_FILE
        if cfg.structural and not eig_path.is_file():
            raise InvalidConfig("Eigensystem missing; run decompose first", {"file": str(eig_path)})

        key = combine_hashes([
            PipelineService.source_key(run),
            hash_file(eig_path) if cfg.structural else "",
            hash_payload(cfg.model_dump(mode="json")),
        ])
        outputs = [SEMANTIC_FILE, STATE_FILE, TRAINING_LOG_FILE] + ([STRUCTURAL_FILE] if cfg.structural else [])
        if not force and _is_cached(out_dir, Stage.CONDENSE.value, key):
            logger.info("[PIPELINE] ✓ Cache hit | stage: condense | dir: %s", out_dir)
            return out_dir

        graph = PipelineService.load_dataset(run)
        source = PipelineService.condensation_source(run, graph, PipelineService.link_split(run, graph))
        eig = load_eigensystem(eig_path) if cfg.structural else None
        result = train_relays(source, cfg, eig, out_dir / TRAINING_LOG_FILE)

        save_checkpoint(out_dir / SEMANTIC_FILE, result.semantic)
        if result.structural is not None:
            save_checkpoint(out_dir / STRUCTURAL_FILE, result.structural)
        save_state(out_dir / STATE_FILE, result.state)
        _record(out_dir, Stage.CONDENSE.value, Stage.CONDENSE, key, outputs)
        logger.info(
            "[PIPELINE] ✓ Condensation written | dir: %s | selected iteration: %d | matching rate: %s",
            out_dir, result.state.selected_iteration, result.state.matching_rate_history,
        )
        return out_dir

    # ---
    # Stage 3: model inversion into the condensed graph directory. A failed
    # inversion leaves a generate.failed.json marker beside the outputs.
    # ---
    @staticmethod
    def generate(run: RunConfig, force: bool = False) -> Path:
        out_dir = Path(run.out_dir)
        cfg, structure = PipelineService.arm(run)
        inputs = [SEMANTIC_FILE, STATE_FILE]
        if structure != Structure.KNN_PROXY:
            inputs += [STRUCTURAL_FILE, EIGEN_FILE]
        missing = [name for name in inputs if not (out_dir / name).is_file()]
        if missing:
            raise InvalidConfig("Condensation outputs missing; run condense first", {"missing": missing})

        key = combine_hashes(
            [hash_file(out_dir / name) for name in inputs]
            + [hash_payload({"inversion": run.inversion.model_dump(), "structure": structure.value})]
        )
        target = out_dir / CONDENSED_DIR
        if not force and _is_cached(out_dir, Stage.GENERATE.value, key):
            logger.info("[PIPELINE] ✓ Cache hit | stage: generate | dir: %s", target)
            return target

        graph = PipelineService.load_dataset(run)
        source = PipelineService.condensation_source(run, graph, PipelineService.link_split(run, graph))
        f = load_checkpoint(out_dir / SEMANTIC_FILE)
        state = load_state(out_dir / STATE_FILE)
        g, eigenvalues = None, None
        if structure != Structure.KNN_PROXY:
            g = load_checkpoint(out_dir / STRUCTURAL_FILE)
            eigenvalues = load_eigensystem(out_dir / EIGEN_FILE).eigenvalues

        provenance = {
            "condense": cfg.model_dump(mode="json"),
            "preset": run.preset,
            "seeds": run.seeds,
            "variant": run.variant.value,
        }
        try:
            cg = generate_condensed(f, g, state, eigenvalues, run.inversion, feature_scale(source), structure, provenance)
        except CTGCError as exc:
            _write_failure(out_dir, Stage.GENERATE, exc)
            raise
        save_condensed(cg, target)
        load_condensed(target)
        _clear_failure(out_dir, Stage.GENERATE)
        _record(out_dir, Stage.GENERATE.value, Stage.GENERATE, key, [CONDENSED_DIR])
        return target

    @staticmethod
    def config_echo(run: RunConfig) -> dict:
        cfg, structure = PipelineService.arm(run)
        return {
            "preset": run.preset,
            "variant": run.variant.value,
            "structure": structure.value,
            "condense": cfg.model_dump(mode="json"),
            "inversion": run.inversion.model_dump(),
            "dataset": run.sbm.model_dump() if run.sbm is not None else run.dataset.model_dump(mode="json"),
        }

    # ---
    # Stage 4: downstream evaluation on the original graph. With relay=True
    # the trained semantic relay model is scored directly instead.
    # ---
    @staticmethod
    def evaluate(run: RunConfig, relay: bool = False, force: bool = False) -> Path:
        out_dir = Path(run.out_dir)
        name = "evaluate-relay" if relay else Stage.EVALUATE.value
        source_path = out_dir / (SEMANTIC_FILE if relay else CONDENSED_DIR)
        if not source_path.exists():
            raise InvalidConfig("Upstream outputs missing", {"missing": str(source_path)})

        upstream = hash_file(source_path) if relay else hash_directory(source_path)
        key = combine_hashes([
            upstream,
            PipelineService.dataset_key(run),
            hash_payload({"eval": run.eval.model_dump(mode="json"), "echo": PipelineService.config_echo(run)}),
        ])
        target = out_dir / (RELAY_REPORT_FILE if relay else REPORT_FILE)
        if not force and _is_cached(out_dir, name, key):
            logger.info("[PIPELINE] ✓ Cache hit | stage: %s | file: %s", name, target)
            return target

        graph = PipelineService.load_dataset(run)
        split = PipelineService.link_split(run, graph)
        echo = PipelineService.config_echo(run)
        if relay:
            report = evaluate_relay(load_checkpoint(source_path), graph, run.eval, split, echo)
        else:
            report = evaluate_condensed(load_condensed(source_path), graph, run.eval, split, echo)
        target.write_text(report.to_json(), encoding="utf-8")
        _record(out_dir, name, Stage.EVALUATE, key, [target.name])
        logger.info("[PIPELINE] ✓ Report written | file: %s", target)
        return target

    # ---
    # decompose → condense → generate → evaluate; fails fast on the first
    # stage error. The structural-free arm skips decomposition.
    # ---
    @staticmethod
    def run(run: RunConfig, force: bool = False) -> Path:
        cfg, _ = PipelineService.arm(run)
        if cfg.structural:
            PipelineService.decompose(run, force)
        PipelineService.condense(run, force)
        PipelineService.generate(run, force)
        return PipelineService.evaluate(run, force=force)

    # ---
    # Coreset baseline of N′ nodes selected on relay embeddings of the
    # condensation source; the same embeddings serve as proxy targets.
    # ---
    @staticmethod
    def baseline(run: RunConfig, method: str, force: bool = False) -> Path:
        if method not in BASELINE_METHODS:
            raise InvalidConfig("Unknown baseline method", {"method": method, "known": list(BASELINE_METHODS)})
        out_dir = Path(run.out_dir)
        semantic_path = out_dir / SEMANTIC_FILE
        if not semantic_path.is_file():
            raise InvalidConfig("Semantic relay checkpoint missing; run condense first", {"file": str(semantic_path)})

        graph = PipelineService.load_dataset(run)
        split = PipelineService.link_split(run, graph)
        source = PipelineService.condensation_source(run, graph, split)
        f = load_checkpoint(semantic_path)
        targets = embed(f, source)
        m = run.condense.n_prime
        if method == "kcenter":
            indices = kcenter_coreset(targets, m, run.condense.seed)
        else:
            indices = random_coreset(source.n, m, run.condense.seed)
        cg = coreset_graph(source, indices, targets, method)

        echo = {**PipelineService.config_echo(run), "baseline": method}
        report = evaluate_condensed(cg, graph, run.eval, split, echo)
        target = out_dir / f"baseline_{method}.json"
        target.write_text(report.to_json(), encoding="utf-8")
        logger.info("[PIPELINE] ✓ Baseline report written | method: %s | file: %s", method, target)
        return target

    # ---
    # Write the SBM fixture in the on-disk graph formats plus a run.json that
    # points the `sbm` preset at it.
    # ---
    @staticmethod
    def fixture(directory: Path, seed: int = 0) -> Path:
        directory = Path(directory)
        sbm = SbmConfig(**{**SBM_FIXTURE, "seed": seed})
        graph = generate_sbm(sbm.block_sizes, sbm.p_in, sbm.p_out, sbm.seed, sbm.noise_std)
        paths = save_graph(graph, directory)
        config = {
            "preset": "sbm",
            "dataset": {name: path.name for name, path in paths.items()},
            "out_dir": str(directory / "run"),
        }
        target = directory / "run.json"
        target.write_text(json.dumps(config, indent=2, sort_keys=True), encoding="utf-8")
        logger.info("[FIXTURE] ✓ SBM fixture written | dir: %s | nodes: %d | edges: %d", directory, graph.n, graph.edge_count)
        return target

    @staticmethod
    def stats(run: RunConfig) -> Path:
        out_dir = Path(run.out_dir)
        condensed_dir = out_dir / CONDENSED_DIR
        graph = PipelineService.load_dataset(run)
        files = run.dataset.files() if run.dataset is not None else []
        original = original_statistics(graph, files)
        condensed = condensed_statistics(load_condensed(condensed_dir), condensed_dir)
        payload = {
            "original": original.model_dump(),
            "condensed": condensed.model_dump(),
            "ratio": condensed.nodes / float(original.nodes),
        }
        target = out_dir / STATS_FILE
        target.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
        logger.info(
            "[PIPELINE] ✓ Statistics | nodes: %d -> %d | edges: %d -> %d | storage MB: %.3f -> %.3f",
            original.nodes, condensed.nodes, original.edges, condensed.edges, original.storage_mb, condensed.storage_mb,
        )
        return target

    # ---
    # α sensitivity: one full run per value under <out>/sweep/alpha_<α>/,
    # summarized into sweep.json.
    # ---
    @staticmethod
    def sweep(run: RunConfig, alphas: Optional[list[float]] = None, force: bool = False) -> Path:
        alphas = list(alphas) if alphas else list(SWEEP_ALPHAS)
        out_dir = Path(run.out_dir)
        summary = []
        for alpha in alphas:
            arm_run = run.model_copy(
                update={
                    "condense": run.condense.model_copy(update={"alpha": float(alpha)}),
                    "out_dir": out_dir / "sweep" / f"alpha_{alpha:g}",
                }
            )
            logger.info("[SWEEP] Running | alpha: %g | dir: %s", alpha, arm_run.out_dir)
            report_path = PipelineService.run(arm_run, force)
            summary.append({"alpha": float(alpha), "report": str(report_path.relative_to(out_dir)),
                            **json.loads(report_path.read_text(encoding="utf-8"))})
        target = out_dir / SWEEP_FILE
        target.write_text(json.dumps(summary, indent=2, sort_keys=True), encoding="utf-8")
        logger.info("[SWEEP] ✓ Sweep written | values: %d | file: %s", len(alphas), target)
        return target
