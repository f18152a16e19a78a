"""Composition of the spatial-abstraction pre-step with a conventional selector.

A pipeline either runs a selector directly on the training instances
(original variant) or first abstracts the training set into grid prototypes
and lets the selector refine those (fast variant). Fast output is synthetic
unless ``snap`` maps prototypes back to their nearest same-class instances.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .dataset import Dataset
from .partitioning import psasa, snap_to_instances
from .selectors import SELECTOR_NAMES, run_selector

__all__ = ["PipelineConfig", "PipelineTiming", "run_pipeline"]


@dataclass(frozen=True)
class PipelineConfig:
    """One pipeline parametrization; defaults follow the benchmark protocol."""

    use_psasa: bool = False
    n: int = 5
    selector: str = "none"
    k: int = 3
    snap: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.selector not in SELECTOR_NAMES:
            raise ValueError(
                f"unknown selector {self.selector!r}; expected one of {SELECTOR_NAMES}"
            )

    @property
    def variant_name(self) -> str:
        prefix = "fast-" if self.use_psasa else ""
        return prefix + self.selector

    def as_dict(self) -> dict:
        return {
            "use_psasa": self.use_psasa,
            "n": self.n,
            "selector": self.selector,
            "k": self.k,
            "snap": self.snap,
        }


@dataclass(frozen=True)
class PipelineTiming:
    """Selection wall time split into abstraction and selector phases."""

    psasa_time: float
    selector_time: float

    @property
    def total(self) -> float:
        return self.psasa_time + self.selector_time


def run_pipeline(train: Dataset, cfg: PipelineConfig):
    """Reduce a training set per one configuration.

    Returns (reduced labeled points, timing). With ``use_psasa`` the selector
    sees the prototype candidates (fresh sequential ids); otherwise it sees
    the training instances. Selector "none" passes candidates through. The
    candidate set is never enlarged, so the output size is at most the
    candidate count, which is at most the training size.
    """
    if len(train) == 0:
        raise ValueError("empty training set")

    psasa_time = 0.0
    if cfg.use_psasa:
        t0 = time.monotonic()
        candidates = psasa(train, cfg.n)
        if cfg.snap:
            candidates = snap_to_instances(candidates, train)
        psasa_time = time.monotonic() - t0
    else:
        candidates = list(train.instances)

    result = run_selector(cfg.selector, candidates, k=cfg.k)
    reduced = sorted(
        (p for p in candidates if p.id in result.selected), key=lambda p: p.id
    )
    return reduced, PipelineTiming(psasa_time, result.wall_time)
