"""Command-line front end: single experiments, benchmark grids, synthetic data.

Exit codes: 0 success, 1 data/runtime errors (message names the offending
row/column where known), 2 flag errors (click usage failure).
"""

from __future__ import annotations

import json
import os
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import click

from .dataset import DataFormatError, bundled_path, load_csv, min_max_scaled, save_csv
from .evaluation import EvaluationReport, run_experiment
from .pipeline import PipelineConfig, run_pipeline
from .selectors import SELECTOR_NAMES
from .synthetic import gaussian_blobs

SELECTOR_CHOICE = click.Choice(SELECTOR_NAMES)


def _load_dataset(path, label_column, scale):
    """Load a CSV path, falling back to a bundled dataset name (iris, wine)."""
    p = Path(path)
    if not p.exists():
        try:
            p = bundled_path(str(path))
        except FileNotFoundError:
            raise click.ClickException(f"dataset not found: {path}") from None
    try:
        ds = load_csv(p, label_column=label_column)
    except (DataFormatError, OSError) as e:
        raise click.ClickException(str(e)) from None
    return min_max_scaled(ds) if scale else ds


@click.group()
@click.version_option(package_name="protoselect")
def main():
    """Prototype selection toolkit: spatial-abstraction accelerator, five
    classic selectors, and a cross-validated benchmark harness."""


@main.command()
@click.option("--data", required=True, help="Dataset CSV path or bundled name.")
@click.option("--selector", type=SELECTOR_CHOICE, required=True)
@click.option("--fast", is_flag=True, help="Run the spatial-abstraction pre-step first.")
@click.option("--n", default=5, show_default=True, help="Grid intervals per dimension.")
@click.option("--k", default=3, show_default=True, help="Neighborhood size.")
@click.option("--folds", default=10, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--snap", is_flag=True, help="Snap prototypes to nearest instances.")
@click.option("--scale", is_flag=True, help="Min-max scale features (off for the benchmark protocol).")
@click.option("--label-column", default="last", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Report file; stdout when omitted.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
def run(data, selector, fast, n, k, folds, seed, snap, scale, label_column, output, fmt):
    """Run one cross-validated experiment and write its report."""
    ds = _load_dataset(data, label_column, scale)
    cfg = PipelineConfig(use_psasa=fast, n=n, selector=selector, k=k, snap=snap)
    try:
        report = run_experiment(ds, cfg, n_folds=folds, seed=seed)
    except ValueError as e:
        raise click.ClickException(str(e)) from None

    if fmt == "json":
        text = report.to_json()
    else:
        text = report.CSV_HEADER + "\n" + report.to_csv_row() + "\n"
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)
    click.echo(report.summary_line(), err=True)


@main.command()
@click.option("--size", default=1000, show_default=True)
@click.option("--dims", default=16, show_default=True)
@click.option("--classes", default=10, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--spread", default=0.02, show_default=True,
              help="Per-dimension standard deviation around each class center.")
@click.option("--output", type=click.Path(dir_okay=False), required=True)
def synth(size, dims, classes, seed, spread, output):
    """Generate a Gaussian-blob dataset CSV for runtime benchmarks."""
    ds = gaussian_blobs(size, dims, classes, seed=seed, spread=spread)
    save_csv(ds, output)
    click.echo(f"wrote {size}x{dims} blobs ({classes} classes) to {output}", err=True)


# ------------------------------------------------------------------ bench


@dataclass
class BenchmarkGrid:
    """Parsed grid file: which cells to run and where to write tables."""

    datasets: list
    selectors: list
    variants: list = field(default_factory=lambda: ["original", "fast"])
    n_values: list = field(default_factory=lambda: [5])
    k: int = 3
    folds: int = 10
    seed: int = 42
    output_dir: str = "bench_out"

    @classmethod
    def from_file(cls, path):
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise click.ClickException(f"cannot read grid file {path}: {e}") from None
        for key in ("datasets", "selectors"):
            if not doc.get(key):
                raise click.ClickException(f"grid file needs a non-empty {key!r} list")
        known = {f.name for f in cls.__dataclass_fields__.values()}
        unknown = set(doc) - known
        if unknown:
            raise click.ClickException(f"unknown grid keys: {sorted(unknown)}")
        grid = cls(**doc)
        if any(n < 1 for n in grid.n_values):
            raise click.ClickException("all n_values must be >= 1")
        bad = [s for s in grid.selectors if s not in SELECTOR_NAMES]
        if bad:
            raise click.ClickException(f"unknown selectors in grid: {bad}")
        bad = [v for v in grid.variants if v not in ("original", "fast")]
        if bad:
            raise click.ClickException(f"unknown variants in grid: {bad}")
        return grid

    def columns(self):
        return [
            ("fast-" if variant == "fast" else "") + sel
            for sel in self.selectors
            for variant in self.variants
        ]

    def config(self, selector, variant, n):
        return PipelineConfig(
            use_psasa=(variant == "fast"), n=n, selector=selector, k=self.k
        )


def _fmt(value, digits=4):
    return "ERR" if value is None else f"{value:.{digits}f}"


def _write_table(path, table, columns, digits=4):
    lines = ["dataset," + ",".join(columns)]
    for name, row in table.items():
        lines.append(name + "," + ",".join(_fmt(row.get(col), digits) for col in columns))
    Path(path).write_text("\n".join(lines) + "\n")


def _median_of_three(fn):
    return statistics.median(fn() for _ in range(3))


@main.command()
@click.argument("grid_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--jobs", default=None, type=int,
              help="Concurrent experiment cells; defaults to $PROTOSELECT_JOBS or 1.")
@click.option("--output-dir", default=None, help="Override the grid's output_dir.")
@click.option("--no-plots", is_flag=True, help="Skip figure rendering.")
@click.option("--no-timing", is_flag=True, help="Skip the runtime comparison table.")
@click.option("--label-column", default="last", show_default=True)
def bench(grid_file, jobs, output_dir, no_plots, no_timing, label_column):
    """Run a benchmark grid: accuracy/reduction tables, timings, n-sweeps.

    Accuracy and reduction cells run concurrently up to --jobs; timed cells
    always run one at a time with nothing else in flight, three repeats,
    median reported. Per-cell failures land in the tables as ERR without
    stopping the rest.
    """
    grid = BenchmarkGrid.from_file(grid_file)
    out_dir = Path(output_dir or grid.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if jobs is None:
        jobs = int(os.environ.get("PROTOSELECT_JOBS", "1"))
    jobs = max(1, jobs)

    datasets = {}
    for path in grid.datasets:
        ds = _load_dataset(path, label_column, scale=False)
        datasets[ds.name] = ds

    headline_n = grid.n_values[0]
    columns = grid.columns()

    # -- cross-validated accuracy/reduction cells (concurrent) ------------
    cells = []
    for ds_name in datasets:
        for sel in grid.selectors:
            for variant in grid.variants:
                for n in grid.n_values if variant == "fast" else [headline_n]:
                    cells.append((ds_name, sel, variant, n))

    def run_cell(cell):
        ds_name, sel, variant, n = cell
        try:
            report = run_experiment(
                datasets[ds_name],
                grid.config(sel, variant, n),
                n_folds=grid.folds,
                seed=grid.seed,
            )
            return cell, report
        except Exception as e:  # recorded as ERR, the rest of the grid continues
            click.echo(f"cell {cell} failed: {e}", err=True)
            return cell, None

    results = {}
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for cell, report in pool.map(run_cell, cells):
            results[cell] = report

    accuracy_table = {name: {} for name in datasets}
    reduction_table = {name: {} for name in datasets}
    for (ds_name, sel, variant, n), report in results.items():
        if n != headline_n:
            continue
        col = ("fast-" if variant == "fast" else "") + sel
        accuracy_table[ds_name][col] = None if report is None else report.mean_accuracy
        reduction_table[ds_name][col] = None if report is None else report.mean_reduction

    _write_table(out_dir / "accuracy.csv", accuracy_table, columns)
    _write_table(out_dir / "reduction.csv", reduction_table, columns)

    # -- n-sweep rows (fast variants only, all n values) ------------------
    sweep_rows = []
    if len(grid.n_values) > 1 and "fast" in grid.variants:
        for (ds_name, sel, variant, n), report in sorted(results.items()):
            if variant != "fast" or report is None:
                continue
            sweep_rows.append(
                {
                    "dataset": ds_name,
                    "selector": sel,
                    "n": n,
                    "mean_accuracy": report.mean_accuracy,
                    "mean_reduction": report.mean_reduction,
                    "mean_selection_time": report.mean_total_time,
                }
            )
        lines = ["dataset,selector,n,mean_accuracy,mean_reduction,mean_selection_time"]
        for r in sweep_rows:
            lines.append(
                f"{r['dataset']},{r['selector']},{r['n']},"
                f"{r['mean_accuracy']:.4f},{r['mean_reduction']:.4f},"
                f"{r['mean_selection_time']:.6f}"
            )
        (out_dir / "nsweep.csv").write_text("\n".join(lines) + "\n")

    # -- timed cells: full-dataset selection, exclusive, median of 3 ------
    timing_table = {name: {} for name in datasets}
    if not no_timing:
        for ds_name, ds in datasets.items():
            for sel in grid.selectors:
                for variant in grid.variants:
                    col = ("fast-" if variant == "fast" else "") + sel
                    cfg = grid.config(sel, variant, headline_n)
                    try:
                        timing_table[ds_name][col] = _median_of_three(
                            lambda: run_pipeline(ds, cfg)[1].total
                        )
                    except Exception as e:
                        click.echo(f"timing {ds_name}/{col} failed: {e}", err=True)
                        timing_table[ds_name][col] = None
        _write_table(out_dir / "timing.csv", timing_table, columns, digits=6)

    if not no_plots:
        from . import plotting

        save = []
        save.append(("accuracy.png", accuracy_table, "Mean accuracy (10-fold CV)", "accuracy"))
        save.append(("reduction.png", reduction_table, "Mean reduction (10-fold CV)", "reduction"))
        for fname, table, title, ylabel in save:
            plotting.save_metric_bars(table, columns, out_dir / fname, title, ylabel)
        if not no_timing:
            plotting.save_timing_bars(
                timing_table, columns, out_dir / "timing.png",
                "Selection wall time (median of 3, log scale)",
            )
        if sweep_rows:
            plotting.save_nsweep_lines(
                sweep_rows, "mean_accuracy", out_dir / "nsweep_accuracy.png",
                "Accuracy vs grid resolution", "mean accuracy",
            )
            plotting.save_nsweep_lines(
                sweep_rows, "mean_reduction", out_dir / "nsweep_reduction.png",
                "Reduction vs grid resolution", "mean reduction",
            )

    click.echo(f"benchmark written to {out_dir}", err=True)


if __name__ == "__main__":
    sys.exit(main())
