"""Seeded Gaussian-blob dataset generator for runtime benchmarks.

Real large benchmark datasets are not redistributed with the package; the
runtime comparisons run on synthetic blobs instead. Class centers are drawn
uniformly in the unit cube and points scatter around them with a small
isotropic spread, giving tight, well-separated clusters whose spatial
structure the grid abstraction can actually compress.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, Instance

__all__ = ["gaussian_blobs"]


def gaussian_blobs(size, dims, classes, seed=42, spread=0.02, name=None) -> Dataset:
    """Dataset of ``size`` points in ``dims`` dimensions across ``classes`` blobs.

    ``spread`` is the per-dimension standard deviation around each class
    center (centers live in [0, 1] per dimension). Points are dealt to
    classes round-robin so class sizes differ by at most one. Deterministic
    in all arguments.
    """
    if size < classes:
        raise ValueError("need at least one point per class")
    if dims < 1 or classes < 1:
        raise ValueError("dims and classes must be >= 1")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(size=(classes, dims))
    assignment = np.arange(size) % classes
    points = centers[assignment] + rng.normal(scale=spread, size=(size, dims))
    instances = [
        Instance(tuple(float(v) for v in points[i]), f"c{assignment[i]}", i)
        for i in range(size)
    ]
    return Dataset(
        instances, name=name or f"blobs-{size}x{dims}x{classes}-s{seed}"
    )
