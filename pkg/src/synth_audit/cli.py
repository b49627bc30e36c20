"""Command-line interface: evaluate, list-metrics, oracle.

Exit codes: 0 on success, 2 on input or usage errors, 3 when the report
was produced but at least one metric ended in an error entry; the oracle
command exits 1 when a deviation exceeds the tolerance.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import MetricConfig, load_generation_map
from .dataset import Role, load_dataset_files
from .errors import SynthAuditError
from .metrics import METRICS, evaluate_all
from .oracle import run_oracle
from .report import OutputFormat, RunConfig, build_report, render

_INPUT_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


@click.group()
def main() -> None:
    """Audit the privacy of a synthetic tabular dataset against the real one."""


def _csv_list(value: str | None) -> tuple[str, ...] | None:
    if value is None:
        return None
    items = tuple(part.strip() for part in value.split(",") if part.strip())
    return items or None


@main.command()
@click.option("--real", "real_path", required=True, type=_INPUT_FILE, help="Real dataset CSV.")
@click.option("--synth", "synth_path", required=True, type=_INPUT_FILE, help="Synthetic dataset CSV.")
@click.option("--schema", "schema_path", required=True, type=_INPUT_FILE, help="Schema JSON shared by both datasets.")
@click.option("--generation-map", "map_path", type=_INPUT_FILE, default=None,
              help="CSV mapping real_index,synthetic_index (0-based bijection).")
@click.option("--keys", default=None, help="Comma-separated key attributes.")
@click.option("--sensitive", default=None, help="Sensitive attribute name.")
@click.option("--select", "select_ids", default=None, help="Comma-separated metric ids to run.")
@click.option("--projection-k", type=click.IntRange(min=1), default=None,
              help="Fixed projection dimension (default: 95% variance rule).")
@click.option("--kfold-k", type=click.IntRange(min=2), default=5, show_default=True)
@click.option("--minkowski-p", type=float, default=2.0, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=42, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the report here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["json", "markdown"]), default="json", show_default=True)
def evaluate(
    real_path: Path,
    synth_path: Path,
    schema_path: Path,
    map_path: Path | None,
    keys: str | None,
    sensitive: str | None,
    select_ids: str | None,
    projection_k: int | None,
    kfold_k: int,
    minkowski_p: float,
    seed: int,
    out_path: Path | None,
    fmt: str,
) -> None:
    """Compute privacy metrics for a (real, synthetic) dataset pair."""
    selection = _csv_list(select_ids)
    try:
        y = load_dataset_files(real_path, schema_path, Role.REAL)
        z = load_dataset_files(synth_path, schema_path, Role.SYNTHETIC)
        cfg = MetricConfig(
            key_attributes=_csv_list(keys) or (),
            sensitive_attribute=sensitive,
            projection_k=projection_k,
            kfold_k=kfold_k,
            minkowski_p=minkowski_p,
            seed=seed,
            generation_map=load_generation_map(map_path) if map_path else None,
        )
        results = evaluate_all(y, z, cfg, selection)
    except SynthAuditError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    run_cfg = RunConfig(
        real_path=str(real_path),
        synth_path=str(synth_path),
        schema_path=str(schema_path),
        generation_map_path=str(map_path) if map_path else None,
        metric_config=cfg,
        selection=selection,
        output_format=OutputFormat(fmt),
    )
    text = render(build_report(run_cfg, results), OutputFormat(fmt))
    if out_path is not None:
        out_path.write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    if any(r.error is not None for r in results):
        sys.exit(3)


@main.command("list-metrics")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table", show_default=True)
def list_metrics(fmt: str) -> None:
    """List the metric ids in canonical order."""
    if fmt == "json":
        rows = [
            {
                "id": m.metric_id,
                "description": m.description,
                "direction": m.direction.value,
                "requires": m.requires,
            }
            for m in METRICS
        ]
        click.echo(json.dumps(rows, indent=2))
        return
    id_w = max(len(m.metric_id) for m in METRICS)
    dir_w = max(len(m.direction.value) for m in METRICS)
    for m in METRICS:
        req = f"  [requires: {m.requires}]" if m.requires else ""
        click.echo(f"{m.metric_id:<{id_w}}  {m.direction.value:<{dir_w}}  {m.description}{req}")


@main.command()
@click.option("--trials", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--max-n", "max_n", type=click.IntRange(min=2), default=30, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=42, show_default=True)
@click.option("--tolerance", type=float, default=1e-9, show_default=True)
def oracle(trials: int, max_n: int, seed: int, tolerance: float) -> None:
    """Check the optimized metrics against brute-force reimplementations."""
    summary = run_oracle(trials, max_n, seed, tolerance)
    for mid in sorted(summary.max_deviation):
        click.echo(f"{mid:<16} max deviation {summary.max_deviation[mid]:.3e}")
    if summary.passed:
        click.echo(f"PASS ({trials} trials, tolerance {tolerance:g})")
        return
    click.echo(f"FAIL (tolerance {tolerance:g})", err=True)
    sys.exit(1)


if __name__ == "__main__":
    main()
