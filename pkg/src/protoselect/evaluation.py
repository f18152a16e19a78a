"""KNN classification, accuracy/reduction metrics, and the cross-validated runner.

An experiment runs one pipeline configuration through stratified k-fold cross
validation: each fold's training side is reduced by the pipeline, the reduced
set classifies the held-out fold with a k-NN vote, and per-fold accuracy,
reduction, and selection wall time are aggregated into an EvaluationReport.
"""

from __future__ import annotations

import json
import warnings as _warnings
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, fold_split, stratified_folds
from .pipeline import PipelineConfig, run_pipeline
from .selectors import _Points, _vote_rows

__all__ = [
    "FoldOutcome",
    "EvaluationReport",
    "knn_classify",
    "accuracy",
    "reduction",
    "run_experiment",
]


@dataclass(frozen=True)
class FoldOutcome:
    fold: int
    accuracy: float
    reduction: float
    psasa_time: float
    selector_time: float
    train_size: int
    reduced_size: int
    empty_output: bool = False

    def as_dict(self) -> dict:
        return {
            "fold": self.fold,
            "accuracy": self.accuracy,
            "reduction": self.reduction,
            "psasa_time": self.psasa_time,
            "selector_time": self.selector_time,
            "train_size": self.train_size,
            "reduced_size": self.reduced_size,
            "empty_output": self.empty_output,
        }


@dataclass(frozen=True)
class EvaluationReport:
    """Per-fold and aggregate outcome of one cross-validated configuration."""

    dataset: str
    config: PipelineConfig
    n_folds: int
    seed: int
    per_fold: tuple
    mean_accuracy: float
    mean_reduction: float
    mean_total_time: float

    def to_json(self, indent=2) -> str:
        doc = {
            "dataset": self.dataset,
            "config": self.config.as_dict(),
            "n_folds": self.n_folds,
            "seed": self.seed,
            "per_fold": [f.as_dict() for f in self.per_fold],
            "mean_accuracy": self.mean_accuracy,
            "mean_reduction": self.mean_reduction,
            "mean_total_time": self.mean_total_time,
        }
        return json.dumps(doc, indent=indent)

    CSV_HEADER = (
        "dataset,selector,fast,n,k,snap,folds,seed,"
        "mean_accuracy,mean_reduction,mean_total_time"
    )

    def to_csv_row(self) -> str:
        cfg = self.config
        return (
            f"{self.dataset},{cfg.selector},{int(cfg.use_psasa)},{cfg.n},{cfg.k},"
            f"{int(cfg.snap)},{self.n_folds},{self.seed},"
            f"{self.mean_accuracy:.4f},{self.mean_reduction:.4f},{self.mean_total_time:.6f}"
        )

    def summary_line(self) -> str:
        return (
            f"{self.dataset}: {self.config.variant_name} "
            f"accuracy={self.mean_accuracy:.4f} reduction={self.mean_reduction:.4f} "
            f"time={self.mean_total_time:.3f}s"
        )


def _code_to_label(model_points):
    """Class labels in the same first-appearance-by-id order _Points interns them."""
    labels = {}
    for p in sorted(model_points, key=lambda q: q.id):
        labels.setdefault(p.label, None)
    return list(labels)


def knn_classify(model_points, query, k):
    """Label of a query point by majority vote of its k nearest model points.

    Uses every model point when fewer than k exist. Neighbor ties break by
    ascending id, vote ties by the nearest tied class, so the answer is
    deterministic.
    """
    model_points = list(model_points)
    if not model_points:
        raise ValueError("empty model")
    ws = _Points(model_points)
    k = min(k, ws.n)
    qv = np.asarray(query.values, dtype=np.float64)
    if qv.shape[0] != ws.m:
        raise ValueError(f"dimension mismatch: query {qv.shape[0]}, model {ws.m}")
    d2 = np.zeros(ws.n)
    for j in range(ws.m):
        diff = ws.X[:, j] - qv[j]
        d2 += diff * diff
    order = np.argsort(d2, kind="stable")[:k]
    code = int(_vote_rows(ws.y[order][None, :], ws.n_classes)[0])
    return _code_to_label(model_points)[code]


def accuracy(model_points, test_instances, k) -> float:
    """Fraction of test instances whose k-NN label matches their true label."""
    test_instances = list(test_instances)
    if not test_instances:
        raise ValueError("empty test set")
    model_points = list(model_points)
    if not model_points:
        raise ValueError("empty model")
    ws = _Points(model_points)
    k = min(k, ws.n)
    label_code = {label: c for c, label in enumerate(_code_to_label(model_points))}

    Q = np.array([t.values for t in test_instances], dtype=np.float64)
    hits = 0
    block = 512
    for lo in range(0, Q.shape[0], block):
        hi = min(lo + block, Q.shape[0])
        d2 = np.zeros((hi - lo, ws.n))
        for j in range(ws.m):
            diff = Q[lo:hi, j : j + 1] - ws.X[:, j]
            d2 += diff * diff
        order = np.argsort(d2, axis=1, kind="stable")[:, :k]
        votes = _vote_rows(ws.y[order], ws.n_classes)
        truth = np.array(
            [label_code.get(t.label, -1) for t in test_instances[lo:hi]], dtype=np.int64
        )
        hits += int((votes == truth).sum())
    return hits / len(test_instances)


def reduction(original_size: int, reduced_size: int) -> float:
    """Discarded fraction (original - reduced) / original."""
    if original_size < 1:
        raise ValueError("original size must be >= 1")
    if not 0 <= reduced_size <= original_size:
        raise ValueError("reduced size must lie in [0, original size]")
    return (original_size - reduced_size) / original_size


def run_experiment(ds: Dataset, cfg: PipelineConfig, n_folds=10, seed=42) -> EvaluationReport:
    """Cross-validated evaluation of one pipeline configuration.

    For each fold: the pipeline reduces the out-of-fold training set, the
    reduced set classifies the fold with cfg.k nearest neighbors, and per-fold
    accuracy/reduction/selection-time go into the report. A fold whose
    pipeline output comes back empty scores accuracy 0 and is flagged instead
    of aborting the experiment. Deterministic in (ds, cfg, n_folds, seed)
    apart from the wall-time fields.
    """
    counts = {}
    for inst in ds.instances:
        counts[inst.label] = counts.get(inst.label, 0) + 1
    thin = {str(lbl): c for lbl, c in counts.items() if c < n_folds}
    if thin:
        _warnings.warn(
            f"{ds.name}: classes with fewer members than folds {thin}, "
            "stratification is best-effort",
            stacklevel=2,
        )

    fa = stratified_folds(ds, n_folds, seed)
    outcomes = []
    for fold in range(n_folds):
        train, test = fold_split(ds, fa, fold)
        train_ids = {inst.id for inst in train.instances}
        test_ids = {inst.id for inst in test}
        assert not train_ids & test_ids, "fold leak: train and test overlap"

        reduced, timing = run_pipeline(train, cfg)
        if reduced:
            acc = accuracy(reduced, test, cfg.k)
        else:
            acc = 0.0
        outcomes.append(
            FoldOutcome(
                fold=fold,
                accuracy=acc,
                reduction=reduction(len(train), len(reduced)),
                psasa_time=timing.psasa_time,
                selector_time=timing.selector_time,
                train_size=len(train),
                reduced_size=len(reduced),
                empty_output=not reduced,
            )
        )

    return EvaluationReport(
        dataset=ds.name,
        config=cfg,
        n_folds=n_folds,
        seed=seed,
        per_fold=tuple(outcomes),
        mean_accuracy=float(np.mean([o.accuracy for o in outcomes])),
        mean_reduction=float(np.mean([o.reduction for o in outcomes])),
        mean_total_time=float(
            np.mean([o.psasa_time + o.selector_time for o in outcomes])
        ),
    )
