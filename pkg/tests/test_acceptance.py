"""Acceptance gate: every criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS/FAIL line
per criterion check. Reference values come from the published benchmark
tables; tolerances are pinned here and never loosened at runtime.

glass.csv and ecoli.csv are not redistributable from this build environment;
their criteria fail with instructions until the authentic UCI files are
dropped in (see scripts/fetch_uci_data.py).
"""

import random
import time

import pytest

from protoselect import (
    Dataset,
    PipelineConfig,
    load_csv,
    partition,
    psasa,
    run_experiment,
    run_pipeline,
)

from conftest import make_points, make_points_general, require_uci
from oracles import (
    centroid_oracle,
    coverage_oracle,
    drop3_oracle,
    enn_oracle,
    icf_oracle,
    local_set_oracle,
    lsbo_oracle,
    lssm_oracle,
    partition_oracle,
    psasa_oracle,
    reachable_oracle,
)
from protoselect import (
    coverage_reachable,
    drop3,
    enn,
    extract_prototype,
    gaussian_blobs,
    icf,
    local_set,
    lsbo,
    lssm,
    run_selector,
    stratified_folds,
)

SEED = 42
FOLDS = 10
K = 3
N = 5


class Checks:
    """Collects sub-checks of one criterion and reports them together."""

    def __init__(self, criterion):
        self.criterion = criterion
        self.failures = []

    def within(self, label, got, target, tol):
        ok = abs(got - target) <= tol + 1e-12
        self._line(label, ok, f"got {got:.4f}, want {target:.2f} +/- {tol:.2f}")
        return ok

    def holds(self, label, ok, detail=""):
        self._line(label, ok, detail)
        return ok

    def _line(self, label, ok, detail):
        state = "PASS" if ok else "FAIL"
        print(f"ACCEPT {self.criterion} [{state}] {label}: {detail}")
        if not ok:
            self.failures.append(f"{label}: {detail}")

    def finish(self):
        assert not self.failures, f"criterion {self.criterion}: " + "; ".join(self.failures)


def cv(ds, selector, fast=False, n=N):
    cfg = PipelineConfig(use_psasa=fast, n=n, selector=selector, k=K)
    return run_experiment(ds, cfg, n_folds=FOLDS, seed=SEED)


# ----------------------------------------------------- criterion 1: metrics


def test_c1_iris_metrics(iris):
    t0 = time.monotonic()
    c = Checks("1-iris")
    c.within("LSSm accuracy", cv(iris, "lssm").mean_accuracy, 0.96, 0.05)
    c.within("ENN accuracy", cv(iris, "enn").mean_accuracy, 0.97, 0.05)
    c.within("LSBo reduction", cv(iris, "lsbo").mean_reduction, 0.92, 0.05)
    c.within("Fast LSBo reduction", cv(iris, "lsbo", fast=True).mean_reduction, 0.95, 0.05)
    c.within("ENN reduction", cv(iris, "enn").mean_reduction, 0.04, 0.05)
    c.within("Fast ENN reduction", cv(iris, "enn", fast=True).mean_reduction, 0.67, 0.05)
    elapsed = time.monotonic() - t0
    c.holds("within 60s", elapsed < 60, f"{elapsed:.1f}s")
    c.finish()


def test_c1_wine_metrics(wine):
    t0 = time.monotonic()
    c = Checks("1-wine")
    c.within("LSSm accuracy", cv(wine, "lssm").mean_accuracy, 0.71, 0.05)
    c.within(
        "Fast LSSm accuracy", cv(wine, "lssm", fast=True).mean_accuracy, 0.79, 0.07
    )
    c.within("DROP3 reduction", cv(wine, "drop3").mean_reduction, 0.80, 0.05)
    elapsed = time.monotonic() - t0
    c.holds("within 60s", elapsed < 60, f"{elapsed:.1f}s")
    c.finish()


def test_c1_glass_metrics():
    ds = load_csv(require_uci("glass"))
    t0 = time.monotonic()
    c = Checks("1-glass")
    c.within("Fast DROP3 reduction", cv(ds, "drop3", fast=True).mean_reduction, 0.86, 0.05)
    c.within("DROP3 reduction", cv(ds, "drop3").mean_reduction, 0.75, 0.05)
    c.within("DROP3 accuracy", cv(ds, "drop3").mean_accuracy, 0.63, 0.07)
    elapsed = time.monotonic() - t0
    c.holds("within 60s", elapsed < 60, f"{elapsed:.1f}s")
    c.finish()


def test_c1_ecoli_metrics():
    ds = load_csv(require_uci("ecoli"))
    t0 = time.monotonic()
    c = Checks("1-ecoli")
    c.within("ICF reduction", cv(ds, "icf").mean_reduction, 0.87, 0.05)
    c.within("Fast ICF reduction", cv(ds, "icf", fast=True).mean_reduction, 0.88, 0.05)
    elapsed = time.monotonic() - t0
    c.holds("within 60s", elapsed < 60, f"{elapsed:.1f}s")
    c.finish()


# ----------------------------------------------------- criterion 2: trends


FAST_SELECTORS = ("enn", "drop3", "icf", "lssm", "lsbo")


def sweep_means(datasets, n):
    acc = {s: [] for s in FAST_SELECTORS}
    red = {s: [] for s in FAST_SELECTORS}
    for ds in datasets:
        for sel in FAST_SELECTORS:
            rep = cv(ds, sel, fast=True, n=n)
            acc[sel].append(rep.mean_accuracy)
            red[sel].append(rep.mean_reduction)
    mean = lambda xs: sum(xs) / len(xs)
    return {s: mean(acc[s]) for s in FAST_SELECTORS}, {s: mean(red[s]) for s in FAST_SELECTORS}


def trend_checks(c, datasets, accuracy_selectors=FAST_SELECTORS):
    acc2, red2 = sweep_means(datasets, n=2)
    acc20, red20 = sweep_means(datasets, n=20)
    for sel in FAST_SELECTORS:
        c.holds(
            f"fast-{sel} reduction falls with n",
            red2[sel] > red20[sel],
            f"n=2: {red2[sel]:.4f} > n=20: {red20[sel]:.4f}",
        )
        if sel in accuracy_selectors:
            c.holds(
                f"fast-{sel} accuracy holds with n",
                acc20[sel] >= acc2[sel] - 0.03,
                f"n=20: {acc20[sel]:.4f} >= n=2: {acc2[sel]:.4f} - 0.03",
            )


def test_c2_nsweep_trends(iris, wine):
    glass = load_csv(require_uci("glass"))
    c = Checks("2-sweep")
    trend_checks(c, [iris, glass, wine])
    c.finish()


def test_c2_nsweep_trends_desk_subset(iris, wine):
    """Same trend directions on the two bundled datasets.

    Not the criterion itself (that one names glass as well and stays red
    until the authentic file is supplied); this keeps the sweep machinery
    verified on redistributable data. The accuracy direction is skipped for
    fast-lsbo: its border-only models lose the 3-neighbor majority vote as n
    grows (with 1-NN evaluation its accuracy matches the published figures),
    so the direction cannot hold under the pinned k=3 evaluation.
    """
    c = Checks("2-sweep-desk")
    trend_checks(c, [iris, wine], accuracy_selectors=("enn", "drop3", "icf", "lssm"))
    c.finish()


def test_c2_runtime_speedups():
    blobs_ds = gaussian_blobs(20000, 16, 10, seed=SEED)
    c = Checks("2-runtime")
    for sel in FAST_SELECTORS:
        _, t_orig = run_pipeline(blobs_ds, PipelineConfig(selector=sel, k=K))
        _, t_fast = run_pipeline(
            blobs_ds, PipelineConfig(use_psasa=True, n=N, selector=sel, k=K)
        )
        speedup = t_orig.total / max(t_fast.total, 1e-9)
        c.holds(
            f"fast-{sel} strictly faster",
            t_fast.total < t_orig.total,
            f"fast {t_fast.total:.2f}s vs original {t_orig.total:.2f}s ({speedup:.0f}x)",
        )
        if sel == "drop3":
            c.holds("fast-drop3 speedup >= 2x", speedup >= 2.0, f"{speedup:.0f}x")
    c.finish()


# ------------------------------------------- criterion 3: oracle equivalence


def test_c3_partitioning_oracles():
    c = Checks("3-partitioning")
    rng = random.Random(71)
    mismatches = 0
    for case in range(200):
        pts = make_points(
            rng.randint(4, 100), rng.randint(1, 5), rng.randint(1, 4), seed=9000 + case
        )
        n = rng.choice([1, 2, 3, 5])
        ds = Dataset(pts, name=f"fixture{case}")

        got_parts = {k: set(v) for k, v in partition(pts, n).groups.items()}
        if got_parts != partition_oracle(pts, n):
            mismatches += 1
            continue

        got = {(p.source_key, ds.label_order(p.label)): p.values for p in psasa(ds, n)}
        want = psasa_oracle(pts, n, list(ds.labels))
        if set(got) != set(want) or any(
            abs(a - b) > 1e-9 for key in got for a, b in zip(got[key], want[key])
        ):
            mismatches += 1
            continue

        members = [p for p in pts if p.label == pts[0].label]
        proto = extract_prototype(members)
        if any(abs(a - b) > 1e-12 for a, b in zip(proto.values, centroid_oracle(members))):
            mismatches += 1

    c.holds("200 randomized fixtures", mismatches == 0, f"{mismatches} mismatches")
    c.finish()


def test_c3_selector_oracles():
    c = Checks("3-selectors")
    counts = {name: 0 for name in ["enn", "icf", "lssm", "local", "covreach", "drop3", "lsbo"]}
    for case in range(100):
        pts = make_points_general(
            random.Random(case).randint(10, 40), 2, 2, seed=5000 + case
        )
        if enn(pts, K).selected != enn_oracle(pts, K):
            counts["enn"] += 1
        if icf(pts, K).selected != icf_oracle(pts, K):
            counts["icf"] += 1
        if lssm(pts).selected != lssm_oracle(pts):
            counts["lssm"] += 1
        probe = pts[case % len(pts)]
        if local_set(pts, probe.id) != local_set_oracle(pts, probe):
            counts["local"] += 1
        cov, reach = coverage_reachable(pts, probe.id)
        if cov != coverage_oracle(pts, probe) or reach != reachable_oracle(pts, probe):
            counts["covreach"] += 1
        if drop3(pts, K).selected != drop3_oracle(pts, K):
            counts["drop3"] += 1
        if lsbo(pts).selected != lsbo_oracle(pts):
            counts["lsbo"] += 1
    for name, bad in counts.items():
        c.holds(f"{name} matches oracle on 100 fixtures", bad == 0, f"{bad} mismatches")
    c.finish()


# ------------------------------------------------- criterion 4: invariants


def test_c4_invariant_suites(iris):
    c = Checks("4-invariants")

    ok = True
    for seed in range(20):
        pts = make_points(60, 3, 2, seed=seed)
        groups = partition(pts, 4).groups
        ids = [i for v in groups.values() for i in v]
        ok = ok and len(ids) == len(pts) and set(ids) == {p.id for p in pts}
    c.holds("disjoint cover", ok)

    ok = True
    for seed in range(20):
        pts = make_points(50, 2, 2, seed=100 + seed)
        sizes = [len(partition(pts, n).groups) for n in (2, 4, 8)]
        ok = ok and sizes[0] <= sizes[1] <= sizes[2]
    c.holds("grid refinement monotonicity", ok)

    ok = True
    for seed in range(10):
        pts = make_points(60, 3, 2, seed=200 + seed)
        ds = Dataset(pts)
        parts = partition(pts, 4)
        for p in psasa(ds, 4):
            for j, v in enumerate(p.values):
                lo = parts.spec.mins[j] + p.source_key[j] * parts.spec.ranges[j]
                hi = parts.spec.mins[j] + (p.source_key[j] + 1) * parts.spec.ranges[j]
                slack = 1e-9 * max(1.0, abs(hi))
                ok = ok and (lo - slack <= v <= hi + slack)
    c.holds("centroid-in-cell convexity", ok)

    ok = True
    for seed in range(5):
        pts = make_points_general(30, 2, 3, seed=300 + seed)
        for sel in FAST_SELECTORS:
            res = run_selector(sel, pts, k=K)
            ok = ok and res.selected <= {p.id for p in pts} and bool(res.selected)
    c.holds("selected subset of input, non-empty", ok)

    ok = True
    for sel in FAST_SELECTORS:
        out, _ = run_pipeline(iris, PipelineConfig(use_psasa=True, selector=sel, k=K))
        ok = ok and len(out) <= len(psasa(iris, N)) <= len(iris)
    c.holds("|output| <= |candidates| <= |train|", ok)

    ok = True
    pts = make_points_general(50, 3, 3, seed=400)
    shuffled = list(pts)
    random.Random(8).shuffle(shuffled)
    for sel in FAST_SELECTORS:
        cfg = PipelineConfig(use_psasa=True, selector=sel, k=K)
        a, _ = run_pipeline(Dataset(pts), cfg)
        b, _ = run_pipeline(Dataset(shuffled), cfg)
        ok = ok and [(p.values, str(p.label)) for p in a] == [
            (p.values, str(p.label)) for p in b
        ]
    c.holds("determinism under input shuffling", ok)

    fa = stratified_folds(iris, FOLDS, SEED)
    folds = [fa.members(f) for f in range(FOLDS)]
    every = set().union(*folds)
    ok = every == {i.id for i in iris.instances} and sum(map(len, folds)) == len(iris)
    c.holds("fold disjointness and cover", ok)

    c.finish()


# ------------------------------------------------- criterion 5: 3-NN floor


def test_c5_identity_pipeline_floor(iris):
    c = Checks("5-identity")
    rep = cv(iris, "none")
    c.holds(
        "plain 3-NN CV accuracy on iris >= 0.93",
        rep.mean_accuracy >= 0.93,
        f"got {rep.mean_accuracy:.4f}",
    )
    c.holds("identity reduction is zero", rep.mean_reduction == 0.0)
    c.finish()
