"""Command-line interface for genfunc.

Usage examples::

    genfunc init --out runs
    genfunc scales --family log1
    genfunc embed --spec delta --then classify --family r1
    genfunc exchange --spec delta
    genfunc global --spec delta --family r1
    genfunc wavefront --spec delta --family bounded
    genfunc report

Exit codes: 0 pass, 2 fail, 3 unclassifiable, 4 error.
"""

from __future__ import annotations

import functools
import logging
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from genfunc.config import Settings
from genfunc.errors import GenfuncError

EMBEDDINGS = ["sigma", "iota", "iota_S", "iota_Sprime"]
FAMILIES = ["bounded", "affine", "r1", "ra", "log1", "log", "full"]  # keys of CLI_NAMES


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _make_settings() -> Settings:
    return Settings()


def _guarded(fn):
    """Map package, I/O and validation errors to a one-line message and exit code 4."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except GenfuncError as exc:
            click.echo(f"Error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(exc.exit_code)
        except (OSError, ValidationError, ValueError) as exc:
            message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            click.echo(f"Error: {message}", err=True)
            sys.exit(4)

    return wrapper


def _context(obj: dict, **overrides):
    from genfunc.pipeline import RunContext, load_config

    out = obj["out"]
    if out is None and obj["config"] is None:
        out = obj["settings"].output_dir
    config = load_config(
        obj["config"],
        output_dir=out,
        fit_window=obj["fit_window"],
        **overrides,
    )
    return RunContext(config, jobs=obj["jobs"], emit_plots=obj["emit_plots"])


def _parse(spec: str):
    from genfunc.models.distribution import parse_spec

    return parse_spec(spec)


def _banner(title: str) -> None:
    click.echo(f"\n{'='*60}")
    click.echo(title)
    click.echo(f"{'='*60}")


def _finish(results) -> None:
    """Echo each stage's summary and exit with the worst outcome's code."""
    for result in results:
        _banner(f"{result.kind}: {result.outcome.value}")
        for key, value in result.summary.items():
            click.echo(f"  {key:<22} {value}")
        click.echo(f"  {'report':<22} {result.path}")
        for extra in result.extras:
            click.echo(f"  {'file':<22} {extra}")
    click.echo(f"{'='*60}")
    sys.exit(max(r.outcome.exit_code for r in results))


# ---------------------------------------------------------------------------
# Root group
# ---------------------------------------------------------------------------

@click.group()
@click.version_option(package_name="genfunc")
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path),
              help="JSON run configuration (see 'init')")
@click.option("--out", default=None, type=click.Path(path_type=Path),
              help="Output directory for nets, reports and profiles")
@click.option("--jobs", default=None, type=int, envvar="GENFUNC_JOBS",
              help="Worker threads for per-frame and per-task work")
@click.option("--fit-window", default=None, type=int,
              help="Fit only the smallest N ladder values")
@click.option("--emit-plots", is_flag=True, help="Write gnuplot scripts next to CSV files")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
@click.pass_context
def main(
    ctx: click.Context,
    config_path: Path | None,
    out: Path | None,
    jobs: int | None,
    fit_window: int | None,
    emit_plots: bool,
    verbose: bool,
) -> None:
    """genfunc: generalized functions as nets of grid-sampled functions."""
    from genfunc.utils.logging import setup_logging

    settings = _make_settings()
    setup_logging(logging.DEBUG if verbose else settings.log_level)
    ctx.obj = {
        "config": config_path or settings.config_file,
        "out": out,
        "jobs": jobs or settings.jobs,
        "fit_window": fit_window,
        "emit_plots": emit_plots,
        "settings": settings,
    }


# ---------------------------------------------------------------------------
# init / scales
# ---------------------------------------------------------------------------

@main.command()
@click.option("--planar", is_flag=True, help="Write the two-dimensional preset")
@click.pass_obj
@_guarded
def init(obj: dict, planar: bool) -> None:
    """Write a complete-defaults config template to <out>/config.json."""
    from genfunc.pipeline import write_template

    out = obj["out"] or obj["settings"].output_dir
    path = write_template(Path(out) / "config.json", planar=planar)
    click.echo(f"Config template written to {path}")


@main.command()
@click.option("--family", default="r1", type=click.Choice(FAMILIES), help="Family to check")
@click.option("--n-max", default=50, type=int, help="Finite index range 0..n_max")
@click.option("--k-max", default=5, type=int, help="Largest translation shift")
@click.pass_obj
@_guarded
def scales(obj: dict, family: str, n_max: int, k_max: int) -> None:
    """Check translation, maximum and superadditive closure of a family."""
    from genfunc.pipeline import run_scales

    _finish([run_scales(_context(obj), family, n_max, k_max)])


# ---------------------------------------------------------------------------
# embed / classify
# ---------------------------------------------------------------------------

@main.command()
@click.option("--spec", required=True, help="Catalog short name, inline JSON or JSON file")
@click.option("--embedding", default="iota", type=click.Choice(EMBEDDINGS))
@click.option("--then", "then", default=None, type=click.Choice(["classify"]),
              help="Chain a follow-up stage on the embedded net")
@click.option("--family", default=None, type=click.Choice(FAMILIES))
@click.pass_obj
@_guarded
def embed(obj: dict, spec: str, embedding: str, then: str | None, family: str | None) -> None:
    """Embed a catalog distribution and store its net."""
    from genfunc.embed.embeddings import EmbeddingKind
    from genfunc.pipeline import run_classify, run_embed

    ctx = _context(obj, family=family)
    stage, result = run_embed(ctx, _parse(spec), EmbeddingKind(embedding))
    results = [stage]
    if then == "classify":
        results.append(run_classify(ctx, result, family))
    _finish(results)


@main.command()
@click.option("--spec", required=True, help="Catalog short name, inline JSON or JSON file")
@click.option("--embedding", default="iota", type=click.Choice(EMBEDDINGS))
@click.option("--family", default=None, type=click.Choice(FAMILIES))
@click.pass_obj
@_guarded
def classify(obj: dict, spec: str, embedding: str, family: str | None) -> None:
    """Classify the space profile of an embedded distribution."""
    from genfunc.embed.embeddings import EmbeddingKind
    from genfunc.pipeline import run_classify

    ctx = _context(obj, family=family)
    result = ctx.embed(_parse(spec), EmbeddingKind(embedding))
    _finish([run_classify(ctx, result, family)])


# ---------------------------------------------------------------------------
# fourier / exchange / global
# ---------------------------------------------------------------------------

@main.command()
@click.option("--spec", required=True)
@click.option("--embedding", default="iota_S", type=click.Choice(EMBEDDINGS))
@click.pass_obj
@_guarded
def fourier(obj: dict, spec: str, embedding: str) -> None:
    """Transform a net; audit the round trip and Plancherel; fit its rough profile."""
    from genfunc.embed.embeddings import EmbeddingKind
    from genfunc.pipeline import run_fourier

    _finish([run_fourier(_context(obj), _parse(spec), EmbeddingKind(embedding))])


@main.command()
@click.option("--spec", required=True)
@click.option("--embedding", default="iota_S", type=click.Choice(EMBEDDINGS))
@click.pass_obj
@_guarded
def exchange(obj: dict, spec: str, embedding: str) -> None:
    """Two-index signatures of a net and its transform, plus the seminorm ratio bound."""
    from genfunc.embed.embeddings import EmbeddingKind
    from genfunc.pipeline import run_exchange

    _finish([run_exchange(_context(obj), _parse(spec), EmbeddingKind(embedding))])


@main.command("global")
@click.option("--spec", required=True)
@click.option("--embedding", default="iota", type=click.Choice(EMBEDDINGS))
@click.option("--family", default=None, type=click.Choice(FAMILIES))
@click.pass_obj
@_guarded
def global_(obj: dict, spec: str, embedding: str, family: str | None) -> None:
    """Classify a cut-off net on the space side and by its rough Fourier profile."""
    from genfunc.embed.embeddings import EmbeddingKind
    from genfunc.pipeline import run_global

    ctx = _context(obj, family=family)
    _finish([run_global(ctx, _parse(spec), family, EmbeddingKind(embedding))])


# ---------------------------------------------------------------------------
# wavefront
# ---------------------------------------------------------------------------

@main.command()
@click.option("--spec", required=True)
@click.option("--embedding", default="iota", type=click.Choice(EMBEDDINGS))
@click.option("--family", default=None, type=click.Choice(FAMILIES))
@click.option("--full-scan", is_flag=True,
              help="Localize at every center instead of the flagged ones and their halo")
@click.pass_obj
@_guarded
def wavefront(
    obj: dict, spec: str, embedding: str, family: str | None, full_scan: bool
) -> None:
    """Estimate the singular support and the wavefront of an embedded distribution."""
    from genfunc.embed.embeddings import EmbeddingKind
    from genfunc.pipeline import run_wavefront

    ctx = _context(obj, family=family)
    scan = True if full_scan else None
    _finish([run_wavefront(ctx, _parse(spec), family, EmbeddingKind(embedding), scan)])


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@main.command()
@click.pass_obj
@_guarded
def report(obj: dict) -> None:
    """Summarize every stored report; exit 2 if any failed."""
    from genfunc.pipeline import aggregate

    ctx = _context(obj)
    outcome, rows = aggregate(ctx)
    if not rows:
        click.echo(f"No reports under {ctx.out / 'reports'}. Run a stage first.")
        sys.exit(0)
    _banner("Run Summary")
    for row in rows:
        click.echo(f"  {row['kind']:<48} {row['outcome']}")
    click.echo(f"{'='*60}")
    sys.exit(outcome.exit_code)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

if __name__ == "__main__":
    main()
