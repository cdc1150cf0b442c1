#!/usr/bin/env python3
"""
Command-line interface for meanper experiments.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import click
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from .config import create_default_config, load_config
from .errors import MeanPeriodicError, ToleranceExceeded
from .pipeline import ExperimentPipeline

console = Console()

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _setup_logging(level: str, log_file: Optional[str] = None) -> None:
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT,
                        handlers=handlers, force=True)


def _fail(error: MeanPeriodicError) -> None:
    console.print(f"[red]Error: {error}[/red]")
    sys.exit(error.exit_code)


def _pipeline(ctx: click.Context, config: Optional[str], out: Optional[str], radius: Optional[float],
              K: Optional[int], tol: Optional[float]) -> ExperimentPipeline:
    overrides = {
        'radius': radius,
        'K': K,
        'outputs.directory': out,
        'tolerances.residual': tol,
        'tolerances.identity': tol,
    }
    experiment = load_config(Path(config) if config else None, overrides)
    level = ctx.obj.get('log_level') or os.environ.get('MEANPER_LOG_LEVEL') or experiment.log_level
    _setup_logging(level, experiment.log_file)
    return ExperimentPipeline(experiment)


def _run(description: str, fn):
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task(description, total=None)
        result = fn()
        progress.update(task, completed=True)
    return result


def _stats_table(title: str, stats: Dict[str, Any]) -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("Item", style="cyan")
    table.add_column("Value", style="green")
    for key, value in stats.items():
        if key == 'files':
            continue
        if isinstance(value, float):
            value = f"{value:.6g}"
        table.add_row(key.replace('_', ' '), str(value))
    return table


def _print_files(stats: Dict[str, Any]) -> None:
    for path in stats.get('files', []):
        console.print(f"[dim]wrote {path}[/dim]")


def experiment_options(fn):
    """Options shared by the experiment commands."""
    fn = click.option('--tol', type=float, help='Override the verification tolerances')(fn)
    fn = click.option('--K', 'K', type=click.IntRange(min=0), help='Override the truncation count')(fn)
    fn = click.option('--radius', type=click.FloatRange(min=0, min_open=True),
                      help='Override the zero-search radius')(fn)
    fn = click.option('--out', '-o', type=click.Path(file_okay=False), help='Output directory')(fn)
    fn = click.option('--config', '-c', type=click.Path(), help='Path to experiment config (JSON or YAML)')(fn)
    return fn


@click.group()
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='Logging level')
@click.option('--verbose', '-v', is_flag=True, help='Shortcut for --log-level DEBUG')
@click.pass_context
def cli(ctx, log_level, verbose):
    """meanper - expansions of mean-periodic functions in exponential monomials."""
    ctx.ensure_object(dict)
    ctx.obj['log_level'] = 'DEBUG' if verbose else log_level


@cli.command()
@experiment_options
@click.pass_context
def analyze(ctx, config, out, radius, K, tol):
    """Locate the zeros of Phi and test whether they form an interpolating variety."""
    try:
        pipeline = _pipeline(ctx, config, out, radius, K, tol)
        stats = _run("Locating zeros...", pipeline.analyze)
    except MeanPeriodicError as e:
        _fail(e)

    console.print(_stats_table("Multiplicity variety", stats))
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("k", style="cyan", justify="right")
    table.add_column("alpha", style="green")
    table.add_column("m", style="yellow", justify="right")
    for k, (alpha, m) in enumerate(pipeline.variety.points[:20]):
        table.add_row(str(k), f"{alpha:.10g}", str(m))
    console.print(table)
    if len(pipeline.variety) > 20:
        console.print(f"[dim]... {len(pipeline.variety) - 20} more in the zeros CSV[/dim]")
    _print_files(stats)


@cli.command()
@experiment_options
@click.pass_context
def decompose(ctx, config, out, radius, K, tol):
    """Extract the general and interpolating expansion coefficients of f."""
    try:
        pipeline = _pipeline(ctx, config, out, radius, K, tol)
        stats = _run("Extracting coefficients...", pipeline.decompose)
    except MeanPeriodicError as e:
        _fail(e)

    console.print(_stats_table("Coefficients", stats))
    if stats.get('diverging'):
        console.print("[yellow]Warning: the interpolating norm is still moving with K[/yellow]")
    _print_files(stats)


@cli.command()
@experiment_options
@click.pass_context
def reconstruct(ctx, config, out, radius, K, tol):
    """Synthesize f from its coefficients on the configured grid."""
    try:
        pipeline = _pipeline(ctx, config, out, radius, K, tol)
        stats = _run("Synthesizing...", pipeline.reconstruct)
    except MeanPeriodicError as e:
        _fail(e)

    console.print(_stats_table("Reconstruction", stats))
    _print_files(stats)


@cli.command()
@experiment_options
@click.pass_context
def verify(ctx, config, out, radius, K, tol):
    """Check the monomial identity and mean-periodicity residuals."""
    try:
        pipeline = _pipeline(ctx, config, out, radius, K, tol)
        results = _run("Running checks...", pipeline.verify)
    except ToleranceExceeded as e:
        results = getattr(e, 'results', None)
        if results:
            _print_checks(results)
        _fail(e)
    except MeanPeriodicError as e:
        _fail(e)

    _print_checks(results)
    _print_files(results)


def _print_checks(results: Dict[str, Any]) -> None:
    summary = results['summary']
    style = "green" if results['overall_status'] == 'passed' else "red"
    console.print(Panel(
        f"Overall: [{style}]{results['overall_status'].upper()}[/{style}]\n"
        f"Passed: {summary['passed']} | Failed: {summary['failed']} | Warnings: {summary['warnings']}",
        title="Verification",
        border_style="cyan"
    ))
    for name, check in results['checks'].items():
        lines = [f"{key.replace('_', ' ')}: {value:.3g}" if isinstance(value, float) else f"{key}: {value}"
                 for key, value in check.get('details', {}).items()]
        for error in check.get('errors', [])[:10]:
            lines.append(f"[red]  • {error}[/red]")
        for warning in check.get('warnings', []):
            lines.append(f"[yellow]  • {warning}[/yellow]")
        border = {"passed": "green", "failed": "red"}.get(check['status'], "yellow")
        console.print(Panel("\n".join(lines) or check['status'], title=f"{name} ({check['status']})",
                            border_style=border))


@cli.command()
@click.argument('path', type=click.Path(dir_okay=False), default='meanper.json')
@click.option('--force', is_flag=True, help='Overwrite an existing file')
def init(path, force):
    """Write a default experiment (Fourier series of sin(2 pi z))."""
    target = Path(path)
    if target.exists() and not force:
        console.print(f"[red]Error: {target} exists (use --force to overwrite)[/red]")
        sys.exit(1)
    create_default_config(target)
    console.print(f"[green]Created default configuration at {target}[/green]")
    console.print("Edit phi and f, then run 'meanper analyze -c " + str(target) + "'.")


def main():
    """Main entry point for the CLI."""
    try:
        cli(obj={})
    except MeanPeriodicError as e:
        _fail(e)
    except Exception as e:
        console.print(f"[red]Error: {e}")
        sys.exit(1)


if __name__ == '__main__':
    main()
