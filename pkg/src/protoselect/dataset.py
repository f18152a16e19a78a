"""Dataset model, CSV ingestion, Euclidean distance, and stratified fold splitting.

A dataset is an ordered collection of labeled numeric instances sharing one
dimension schema. Everything here is immutable after construction and safe to
share between workers; all functions are pure.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Instance",
    "Dataset",
    "FoldAssignment",
    "DataFormatError",
    "load_csv",
    "save_csv",
    "distance",
    "stratified_folds",
    "fold_split",
    "min_max_scaled",
    "bundled_path",
]

_DATA_DIR = Path(__file__).parent / "data"


class DataFormatError(ValueError):
    """Raised when a CSV file cannot be interpreted as a numeric dataset."""


@dataclass(frozen=True)
class Instance:
    """One labeled data point: a tuple of finite reals plus a class label.

    ``id`` is the instance's stable ordinal within its dataset and is what
    selectors and fold assignments refer to.
    """

    values: tuple[float, ...]
    label: object
    id: int


class Dataset:
    """Ordered, immutable collection of instances with a shared dimension count.

    ``labels`` preserves first-appearance order so that any label-ordered
    iteration downstream is deterministic. A float64 matrix of the values is
    precomputed for vectorized consumers.
    """

    def __init__(self, instances, name="dataset"):
        instances = tuple(instances)
        if not instances:
            raise ValueError("a Dataset needs at least one instance")
        self.name = name
        self.instances = instances
        self.dim_count = len(instances[0].values)
        seen = {}
        for inst in instances:
            if len(inst.values) != self.dim_count:
                raise ValueError(
                    f"instance {inst.id} has {len(inst.values)} values, expected {self.dim_count}"
                )
            seen.setdefault(inst.label, None)
        self.labels = tuple(seen)
        self.matrix = np.array([inst.values for inst in instances], dtype=np.float64)
        self.matrix.setflags(write=False)

    def __len__(self):
        return len(self.instances)

    def __repr__(self):
        return (
            f"Dataset({self.name!r}, {len(self.instances)} instances, "
            f"{self.dim_count} dims, {len(self.labels)} classes)"
        )

    def label_order(self, label) -> int:
        """Position of ``label`` in first-appearance order."""
        return self.labels.index(label)

    def subset(self, ids, name=None) -> "Dataset":
        """New Dataset keeping only the given instance ids (original ids retained)."""
        wanted = set(ids)
        kept = [inst for inst in self.instances if inst.id in wanted]
        return Dataset(kept, name=name or self.name)


@dataclass(frozen=True)
class FoldAssignment:
    """Deterministic stratified mapping from instance id to fold index."""

    fold_of: dict
    n_folds: int
    seed: int

    def members(self, fold: int) -> frozenset:
        return frozenset(i for i, f in self.fold_of.items() if f == fold)


def distance(a, b) -> float:
    """Euclidean distance between two points (anything with a ``values`` tuple)."""
    va, vb = a.values, b.values
    if len(va) != len(vb):
        raise ValueError(f"dimension mismatch: {len(va)} vs {len(vb)}")
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(va, vb)))


def _parse_float(cell: str) -> float:
    v = float(cell)
    if not math.isfinite(v):
        raise ValueError("non-finite value")
    return v


def _is_numeric(cell: str) -> bool:
    # header detection only: nan/inf count as numeric-looking so that a bad
    # data row is reported as a data error, not silently eaten as a header
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_csv(path, label_column="last", name=None) -> Dataset:
    """Load a UTF-8 comma-separated file of numeric features plus a label column.

    ``label_column`` is either a header name or the sentinel ``"last"``. With
    "last", a header row is assumed when row 1's label cell is non-numeric and
    at least one of its feature cells does not parse as a number (UCI exports
    come both with and without headers). Feature cells must parse as finite
    reals; violations raise DataFormatError naming the offending row/column.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as f:
        rows = [row for row in csv.reader(f) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise DataFormatError(f"{path}: file contains no data rows")

    width = len(rows[0])
    if width < 2:
        raise DataFormatError(f"{path}: need at least one feature column and a label column")
    for lineno, row in enumerate(rows, start=1):
        if len(row) != width:
            raise DataFormatError(
                f"{path}: row {lineno} has {len(row)} columns, expected {width}"
            )

    if label_column == "last":
        label_idx = width - 1
        first = rows[0]
        header_like = not _is_numeric(first[label_idx]) and any(
            not _is_numeric(first[j]) for j in range(width) if j != label_idx
        )
        data_rows = rows[1:] if header_like else rows
        start_line = 2 if header_like else 1
    else:
        header = rows[0]
        if label_column not in header:
            raise DataFormatError(f"{path}: no column named {label_column!r} in header")
        label_idx = header.index(label_column)
        data_rows = rows[1:]
        start_line = 2

    if not data_rows:
        raise DataFormatError(f"{path}: header only, no data rows")

    instances = []
    for i, row in enumerate(data_rows):
        values = []
        for j, cell in enumerate(row):
            if j == label_idx:
                continue
            try:
                values.append(_parse_float(cell.strip()))
            except ValueError:
                raise DataFormatError(
                    f"{path}: row {start_line + i}, column {j + 1}: "
                    f"{cell.strip()!r} is not a finite number"
                ) from None
        instances.append(Instance(tuple(values), row[label_idx].strip(), i))
    return Dataset(instances, name=name or path.stem)


def save_csv(ds: Dataset, path) -> None:
    """Write a dataset back to CSV (17 significant digits, label last)."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow([f"f{j}" for j in range(ds.dim_count)] + ["label"])
        for inst in ds.instances:
            w.writerow([format(v, ".17g") for v in inst.values] + [str(inst.label)])


def min_max_scaled(ds: Dataset) -> Dataset:
    """Per-dimension min-max scaling to [0, 1]; constant dimensions map to 0.

    Off everywhere by default: the benchmark protocol runs on raw values.
    """
    lo = ds.matrix.min(axis=0)
    span = ds.matrix.max(axis=0) - lo
    span[span == 0] = 1.0
    scaled = (ds.matrix - lo) / span
    instances = [
        Instance(tuple(float(v) for v in scaled[i]), inst.label, inst.id)
        for i, inst in enumerate(ds.instances)
    ]
    return Dataset(instances, name=ds.name)


def stratified_folds(ds: Dataset, n_folds: int, seed: int) -> FoldAssignment:
    """Seeded stratified fold assignment.

    Every class is shuffled independently and dealt so that per-class counts
    per fold differ by at most 1; each class's surplus goes to the currently
    least-loaded folds, which keeps global fold sizes within 1 as well.
    Identical (dataset, n_folds, seed) inputs give identical assignments.
    """
    if n_folds < 2:
        raise ValueError("n_folds must be >= 2")
    if n_folds > len(ds):
        raise ValueError(f"n_folds={n_folds} exceeds dataset size {len(ds)}")

    rng = random.Random(seed)
    by_class = {label: [] for label in ds.labels}
    for inst in ds.instances:
        by_class[inst.label].append(inst.id)

    fold_of = {}
    totals = [0] * n_folds
    for label in ds.labels:
        ids = by_class[label]
        rng.shuffle(ids)
        base, extra = divmod(len(ids), n_folds)
        # folds sorted by (current load, index): surplus lands on the lightest
        order = sorted(range(n_folds), key=lambda f: (totals[f], f))
        quota = [base] * n_folds
        for f in order[:extra]:
            quota[f] += 1
        pos = 0
        for f in range(n_folds):
            for inst_id in ids[pos : pos + quota[f]]:
                fold_of[inst_id] = f
            totals[f] += quota[f]
            pos += quota[f]
    return FoldAssignment(fold_of, n_folds, seed)


def fold_split(ds: Dataset, fa: FoldAssignment, fold: int):
    """(train Dataset, test instance tuple) for one fold of an assignment."""
    test = tuple(inst for inst in ds.instances if fa.fold_of[inst.id] == fold)
    train_ids = [inst.id for inst in ds.instances if fa.fold_of[inst.id] != fold]
    return ds.subset(train_ids, name=f"{ds.name}#train{fold}"), test


def bundled_path(dataset_name: str) -> Path:
    """Path of a dataset CSV shipped with the package (iris, wine)."""
    p = _DATA_DIR / f"{dataset_name}.csv"
    if not p.exists():
        raise FileNotFoundError(
            f"no bundled dataset {dataset_name!r}; available: "
            + ", ".join(sorted(q.stem for q in _DATA_DIR.glob("*.csv")))
        )
    return p
