"""Figure rendering for benchmark outputs.

Every figure is written next to its CSV so results can be eyeballed without a
separate plotting step; the CSVs stay the canonical output. Uses the Agg
backend, safe on headless machines.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["save_metric_bars", "save_timing_bars", "save_nsweep_lines"]

_BAR_COLORS = plt.rcParams["axes.prop_cycle"].by_key()["color"]


def _grouped_bars(ax, table, columns, log_y=False):
    datasets = list(table)
    width = 0.8 / max(len(columns), 1)
    for c, col in enumerate(columns):
        xs, ys = [], []
        for d, name in enumerate(datasets):
            v = table[name].get(col)
            if v is None:
                continue
            xs.append(d + c * width)
            ys.append(v)
        ax.bar(xs, ys, width=width, label=col, color=_BAR_COLORS[c % len(_BAR_COLORS)])
    ax.set_xticks([d + 0.4 - width / 2 for d in range(len(datasets))])
    ax.set_xticklabels(datasets, rotation=30, ha="right")
    if log_y:
        ax.set_yscale("log")
    ax.legend(fontsize=8, ncol=2)
    ax.grid(True, axis="y", alpha=0.3)


def save_metric_bars(table, columns, path, title, ylabel):
    """Grouped bar chart of a dataset-by-algorithm metric table."""
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(table)), 4))
    _grouped_bars(ax, table, columns)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_timing_bars(table, columns, path, title):
    """Selection-time comparison on a log scale, one bar group per dataset."""
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(table)), 4))
    _grouped_bars(ax, table, columns, log_y=True)
    ax.set_ylabel("selection wall time (s)")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_nsweep_lines(rows, value_key, path, title, ylabel):
    """Metric vs interval count, one line per selector, averaged over datasets.

    ``rows`` are dicts with keys: dataset, selector, n, and the metric fields.
    """
    by_selector = {}
    for row in rows:
        by_selector.setdefault(row["selector"], {}).setdefault(row["n"], []).append(
            row[value_key]
        )
    fig, ax = plt.subplots(figsize=(6, 4))
    for sel in sorted(by_selector):
        ns = sorted(by_selector[sel])
        means = [sum(by_selector[sel][n]) / len(by_selector[sel][n]) for n in ns]
        ax.plot(ns, means, marker="o", label=f"fast-{sel}")
    ax.set_xlabel("intervals per dimension (n)")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
