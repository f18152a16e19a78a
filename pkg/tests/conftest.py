"""Shared fixtures: bundled data paths, random labeled-point factories."""

import os
import random
from pathlib import Path

import pytest

from protoselect import Instance, bundled_path, load_csv

TESTS_DIR = Path(__file__).parent


def make_points(count, dims, classes, seed, lo=0.0, hi=1.0):
    """Random labeled points with ids 0..count-1, deterministic in seed."""
    rng = random.Random(seed)
    return [
        Instance(
            tuple(rng.uniform(lo, hi) for _ in range(dims)),
            f"c{rng.randrange(classes)}",
            i,
        )
        for i in range(count)
    ]


def general_position(points) -> bool:
    """No two pairwise squared distances equal (makes tie-breaking moot)."""
    seen = set()
    for i, a in enumerate(points):
        for b in points[i + 1 :]:
            s = sum((x - y) ** 2 for x, y in zip(a.values, b.values))
            if s in seen:
                return False
            seen.add(s)
    return True


def make_points_general(count, dims, classes, seed):
    """Random points re-drawn until in general position (random floats almost
    always are; the check guards against freak collisions)."""
    for attempt in range(10):
        pts = make_points(count, dims, classes, seed * 1000 + attempt)
        if general_position(pts):
            return pts
    raise AssertionError("could not draw points in general position")


def uci_path(name):
    """Resolve a dataset CSV: bundled data, then PROTOSELECT_DATA_DIR, then tests/data.

    Returns None when the file exists nowhere, so callers can fail with an
    actionable message.
    """
    try:
        return bundled_path(name)
    except FileNotFoundError:
        pass
    env = os.environ.get("PROTOSELECT_DATA_DIR")
    for base in ([Path(env)] if env else []) + [TESTS_DIR / "data"]:
        p = base / f"{name}.csv"
        if p.exists():
            return p
    return None


MISSING_UCI_MSG = (
    "{name}.csv is not available: the authentic UCI table cannot be redistributed "
    "from this build environment (no network access). Fetch it on a networked "
    "machine with `python scripts/fetch_uci_data.py` and drop {name}.csv into "
    "src/protoselect/data/, tests/data/, or $PROTOSELECT_DATA_DIR, then rerun."
)


def require_uci(name):
    path = uci_path(name)
    if path is None:
        pytest.fail(MISSING_UCI_MSG.format(name=name))
    return path


@pytest.fixture(scope="session")
def iris():
    return load_csv(bundled_path("iris"))


@pytest.fixture(scope="session")
def wine():
    return load_csv(bundled_path("wine"))
