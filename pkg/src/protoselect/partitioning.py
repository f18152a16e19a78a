"""Uniform grid spatial abstraction and centroid prototype generation.

The accelerator splits the bounding box of a point collection into n intervals
per dimension, groups points by the grid cell they fall in, and replaces each
(cell, class) group with its centroid. The grid covers the collection exactly:
cells are non-overlapping and the per-dimension maximum is clamped into the
last interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, Instance

__all__ = [
    "PartitionKey",
    "GridSpec",
    "PartitionSet",
    "Prototype",
    "grid_spec",
    "interval_index",
    "partition",
    "extract_prototype",
    "psasa",
    "snap_to_instances",
    "partition_debug_dump",
]

# An m-tuple of interval indices, one per dimension. Plain tuples hash and
# compare componentwise, which is all a cell key needs.
PartitionKey = tuple


@dataclass(frozen=True)
class GridSpec:
    """Grid geometry over one point collection: interval count, minima, widths."""

    n: int
    mins: tuple[float, ...]
    ranges: tuple[float, ...]


@dataclass(frozen=True)
class Prototype:
    """Synthetic centroid of same-class points from one grid cell.

    Carries provenance (source cell key, member count) for diagnostics; the
    provenance never influences downstream selection.
    """

    values: tuple[float, ...]
    label: object
    member_count: int
    source_key: PartitionKey
    id: int = 0


@dataclass(frozen=True)
class PartitionSet:
    """Non-empty grid cells of one collection: cell key -> member instance ids."""

    groups: dict
    source: str
    spec: GridSpec


def _stack_values(points) -> np.ndarray:
    return np.array([p.values for p in points], dtype=np.float64)


def grid_spec(points, n: int) -> GridSpec:
    """Grid geometry for a collection: per-dimension min and width (max-min)/n."""
    points = list(points)
    if not points:
        raise ValueError("cannot build a grid over an empty collection")
    if n < 1:
        raise ValueError("n must be >= 1")
    m = _stack_values(points)
    mins = m.min(axis=0)
    ranges = (m.max(axis=0) - mins) / n
    return GridSpec(n, tuple(float(v) for v in mins), tuple(float(v) for v in ranges))


def interval_index(v: float, min_j: float, range_j: float, n: int) -> int:
    """Index of the interval containing ``v``, clamped into [0, n-1].

    The raw floor lands the dimension maximum on index n; clamping keeps the
    grid a cover. A zero-width dimension (constant over the collection) maps
    everything to 0.
    """
    if range_j == 0:
        return 0
    idx = math.floor((v - min_j) / range_j)
    return min(max(idx, 0), n - 1)


def _key_matrix(values: np.ndarray, spec: GridSpec) -> np.ndarray:
    mins = np.asarray(spec.mins)
    ranges = np.asarray(spec.ranges)
    safe = np.where(ranges == 0, 1.0, ranges)
    idx = np.floor((values - mins) / safe).astype(np.int64)
    idx[:, ranges == 0] = 0
    return np.clip(idx, 0, spec.n - 1)


def partition(points, n: int, source: str = "") -> PartitionSet:
    """Group a collection into its non-empty grid cells (disjoint cover).

    Every point lands in exactly one cell, keyed by the componentwise interval
    index of its values; cells without points are not materialized.
    """
    points = list(points)
    spec = grid_spec(points, n)
    keys = _key_matrix(_stack_values(points), spec)
    groups = {}
    for p, row in zip(points, keys):
        groups.setdefault(tuple(int(x) for x in row), []).append(p.id)
    return PartitionSet(
        {k: frozenset(ids) for k, ids in groups.items()}, source, spec
    )


def extract_prototype(members, source_key: PartitionKey = (), proto_id: int = 0) -> Prototype:
    """Centroid prototype of a non-empty, single-class set of points."""
    members = list(members)
    if not members:
        raise ValueError("cannot extract a prototype from an empty set")
    labels = {p.label for p in members}
    if len(labels) > 1:
        raise ValueError(f"mixed labels in prototype members: {labels}")
    centroid = _stack_values(members).mean(axis=0)
    return Prototype(
        values=tuple(float(v) for v in centroid),
        label=members[0].label,
        member_count=len(members),
        source_key=tuple(source_key),
        id=proto_id,
    )


def psasa(train: Dataset, n: int) -> list[Prototype]:
    """Candidate prototypes of a dataset: one centroid per (grid cell, class).

    Cells come from ``partition``; within each cell every class present
    contributes the centroid of its members (classes absent from a cell are
    skipped, an empty member set has no centroid). Prototypes get fresh
    sequential ids in (sorted cell key, label first-appearance) order so that
    id-based tie-breaking downstream is reproducible. The output never exceeds
    one prototype per input instance.
    """
    parts = partition(train.instances, n, source=train.name)
    by_id = {inst.id: inst for inst in train.instances}
    protos = []
    for key in sorted(parts.groups):
        members = [by_id[i] for i in parts.groups[key]]
        cell_classes = {}
        for inst in members:
            cell_classes.setdefault(inst.label, []).append(inst)
        for label in sorted(cell_classes, key=train.label_order):
            protos.append(
                extract_prototype(cell_classes[label], source_key=key, proto_id=len(protos))
            )
    return protos


def snap_to_instances(prototypes, train: Dataset) -> list[Instance]:
    """Nearest same-class actual instance of each prototype, deduplicated.

    Distance ties break toward the lowest instance id. Raises if a prototype's
    label does not occur in the dataset.
    """
    prototypes = list(prototypes)
    if not prototypes:
        raise ValueError("no prototypes to snap")
    by_label = {}
    for inst in train.instances:
        by_label.setdefault(inst.label, []).append(inst)
    label_matrix = {
        label: np.array([inst.values for inst in insts], dtype=np.float64)
        for label, insts in by_label.items()
    }

    chosen_ids = set()
    for proto in prototypes:
        if proto.label not in by_label:
            raise ValueError(f"prototype label {proto.label!r} absent from {train.name!r}")
        candidates = label_matrix[proto.label]
        d2 = ((candidates - np.asarray(proto.values)) ** 2).sum(axis=1)
        # instances are listed in id order, argmin's first hit is the lowest id
        chosen_ids.add(by_label[proto.label][int(np.argmin(d2))].id)
    return [inst for inst in train.instances if inst.id in chosen_ids]


def partition_debug_dump(parts: PartitionSet, points) -> list[dict]:
    """JSON-ready view of a PartitionSet: key, member count, per-label counts."""
    label_of = {p.id: p.label for p in points}
    dump = []
    for key in sorted(parts.groups):
        ids = parts.groups[key]
        per_label = {}
        for i in sorted(ids):
            lbl = str(label_of[i])
            per_label[lbl] = per_label.get(lbl, 0) + 1
        dump.append({"key": list(key), "count": len(ids), "labels": per_label})
    return dump
