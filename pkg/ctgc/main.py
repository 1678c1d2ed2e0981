# ---
# File: ctgc/main.py
# Purpose: Command-line entry point: decompose, condense, generate, eval,
#          pipeline, baseline, stats, sweep and fixture commands, logging
#          setup, thread limits and the top-level error handler.
# ---

import logging
from pathlib import Path
from typing import Any, Optional

import click
from threadpoolctl import threadpool_limits

from ctgc import __version__
from ctgc.errors import CTGCError
from ctgc.evaluation.models import Task, Variant
from ctgc.pipeline.models import RunConfig, load_run_config
from ctgc.pipeline.pipeline_services import BASELINE_METHODS, PipelineService
from ctgc.pipeline.presets import preset_names
from ctgc.settings import get_settings

logger = logging.getLogger(__name__)

EXIT_DOMAIN_ERROR = 2
EXIT_UNHANDLED = 1


# ---
# Logging Configuration
# ---
def configure_logging(level: Optional[str] = None) -> None:
    level = (level or get_settings().log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        force=True,
    )


# ---
# Global exception handler. Domain errors exit with 2, anything else is
# logged with its traceback and exits with 1. Click's own usage errors pass
# through untouched.
# ---
class GuardedGroup(click.Group):
    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (click.exceptions.ClickException, click.exceptions.Exit, click.exceptions.Abort):
            raise
        except CTGCError as exc:
            logger.error("[ERROR] %s: %s | details: %s", type(exc).__name__, exc.message, exc.details)
            ctx.exit(EXIT_DOMAIN_ERROR)
        except Exception:
            logger.exception("[UNHANDLED EXCEPTION]")
            ctx.exit(EXIT_UNHANDLED)


def run_options(with_alpha: bool = True):
    """Shared run-config flags; each one overrides its config key."""
    options = [
        click.option("--config", "config_path", type=click.Path(path_type=Path), help="JSON or YAML run config"),
        click.option("--preset", type=click.Choice(preset_names(), case_sensitive=False), help="Bundled dataset hyperparameters"),
        click.option("--out", "out_dir", type=click.Path(path_type=Path), help="Output directory"),
        click.option("--seed", "seeds", type=int, multiple=True, help="Evaluation seed (repeatable)"),
        click.option("--k-iter", type=int, help="Alternating iterations"),
        click.option("--tau", type=float, help="Contrastive temperature"),
        click.option("--n-prime", type=int, help="Condensed node count"),
        click.option("--threshold", type=float, help="Adjacency sparsification threshold"),
        click.option("--tasks", type=click.Choice([t.value for t in Task]), multiple=True, help="Tasks to evaluate (repeatable)"),
        click.option("--variant", type=click.Choice([v.value for v in Variant]), help="Ablation variant"),
        click.option("--force", is_flag=True, help="Recompute cached stages"),
    ]
    if with_alpha:
        options.append(click.option("--alpha", type=float, help="Centroid separation weight"))

    def decorator(func):
        for option in reversed(options):
            func = option(func)
        return func

    return decorator


def build_config(params: dict[str, Any]) -> RunConfig:
    overrides = {
        "preset": params.get("preset"),
        "out_dir": params.get("out_dir"),
        "variant": params.get("variant"),
        "condense": {
            "k_iter": params.get("k_iter"),
            "alpha": params.get("alpha"),
            "tau": params.get("tau"),
            "n_prime": params.get("n_prime"),
        },
        "inversion": {"threshold": params.get("threshold")},
        "eval": {
            "seeds": list(params["seeds"]) if params.get("seeds") else None,
            "tasks": list(params["tasks"]) if params.get("tasks") else None,
        },
    }
    return load_run_config(params.get("config_path"), overrides)


@click.group(cls=GuardedGroup)
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
@click.version_option(__version__, prog_name="ctgc")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]):
    """Self-supervised graph condensation."""
    configure_logging(log_level)
    threads = get_settings().threads
    if threads is not None:
        ctx.with_resource(threadpool_limits(limits=threads))
        logger.debug("[CLI] Thread limit applied | threads: %d", threads)


@cli.command()
@run_options()
def decompose(**params):
    """Extremal eigenpairs of the graph Laplacian (CTGE file)."""
    run = build_config(params)
    click.echo(PipelineService.decompose(run, params["force"]))


@cli.command()
@run_options()
def condense(**params):
    """Pretrain and alternately optimize the relay models."""
    run = build_config(params)
    click.echo(PipelineService.condense(run, params["force"]))


@cli.command()
@run_options()
def generate(**params):
    """Synthesize the condensed graph by model inversion."""
    run = build_config(params)
    click.echo(PipelineService.generate(run, params["force"]))


@cli.command(name="eval")
@run_options()
@click.option("--relay", is_flag=True, help="Score the semantic relay model instead of the condensed graph")
def evaluate(relay: bool, **params):
    """Downstream evaluation on the original graph."""
    run = build_config(params)
    click.echo(PipelineService.evaluate(run, relay=relay, force=params["force"]))


@cli.command()
@run_options()
def pipeline(**params):
    """decompose → condense → generate → eval, with caching."""
    run = build_config(params)
    click.echo(PipelineService.run(run, params["force"]))


@cli.command()
@run_options()
@click.option("--method", type=click.Choice(list(BASELINE_METHODS)), default="kcenter", show_default=True)
def baseline(method: str, **params):
    """Coreset baseline evaluated with the same protocol."""
    run = build_config(params)
    click.echo(PipelineService.baseline(run, method, params["force"]))


@cli.command()
@run_options()
def stats(**params):
    """Size statistics of the original and condensed graphs."""
    run = build_config(params)
    click.echo(PipelineService.stats(run))


@cli.command()
@run_options(with_alpha=False)
@click.option("--alpha", "alphas", type=float, multiple=True, help="α value (repeatable)")
def sweep(alphas: tuple[float, ...], **params):
    """α sensitivity: one pipeline run per value."""
    run = build_config(params)
    click.echo(PipelineService.sweep(run, list(alphas), params["force"]))


@cli.command()
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("data/sbm"), show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def fixture(out_dir: Path, seed: int):
    """Write the synthetic SBM dataset and a run.json pointing at it."""
    click.echo(PipelineService.fixture(out_dir, seed))


def main() -> None:
    cli(prog_name="ctgc")


if __name__ == "__main__":
    main()
