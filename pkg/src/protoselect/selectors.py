"""The five classic selection algorithms over arbitrary labeled point collections.

Every selector accepts an ordered collection of points (dataset instances or
grid prototypes, anything with ``values``/``label``/``id``) and returns a
SelectionResult whose ``selected`` ids are a subset of the input ids.

Shared conventions, applied everywhere so results are deterministic and
reproducible across platforms and worker counts:

- distances are Euclidean; comparisons happen on exact squared distances,
  accumulated dimension by dimension in index order;
- neighbor ranking breaks distance ties by ascending point id;
- majority votes break class-count ties toward the class of the nearest
  neighbor among the tied classes;
- a point is never its own neighbor;
- single-class degenerate inputs come back unchanged with a warning instead
  of raising, so pipelines over abstracted candidates never abort.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SelectionResult",
    "NeighborIndex",
    "enn",
    "drop3",
    "icf",
    "lssm",
    "lsbo",
    "local_set",
    "coverage_reachable",
    "SELECTOR_NAMES",
    "run_selector",
]

SELECTOR_NAMES = ("enn", "drop3", "icf", "lssm", "lsbo", "none")

# Full squared-distance matrices are cached below this point count; larger
# collections get block-at-a-time rows with an argpartition shortcut.
_DENSE_LIMIT = 3000
_BLOCK = 256


@dataclass
class SelectionResult:
    """Outcome of one selector run: surviving ids, parameters, wall time."""

    selected: frozenset
    algorithm: str
    params: dict = field(default_factory=dict)
    wall_time: float = 0.0
    warnings: tuple = ()


class _Points:
    """Internal array view of a point collection, ordered by ascending id.

    Positions in the arrays follow id order, so any stable positional
    tie-break implements the documented ascending-id rule.
    """

    def __init__(self, points):
        pts = sorted(points, key=lambda p: p.id)
        if not pts:
            raise ValueError("empty point collection")
        ids = [p.id for p in pts]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate point ids in collection")
        self.ids = np.array(ids, dtype=np.int64)
        self.X = np.array([p.values for p in pts], dtype=np.float64)
        order = {}
        for p in pts:
            order.setdefault(p.label, len(order))
        self.y = np.array([order[p.label] for p in pts], dtype=np.int64)
        self.n, self.m = self.X.shape
        self.n_classes = len(order)
        self._full_d2 = None
        self._sq = None

    @classmethod
    def from_arrays(cls, X, y, ids):
        ws = cls.__new__(cls)
        ws.ids, ws.X, ws.y = ids, X, y
        ws.n, ws.m = X.shape
        ws.n_classes = len(np.unique(y))
        ws._full_d2 = None
        ws._sq = None
        return ws

    def take(self, positions):
        return _Points.from_arrays(self.X[positions], self.y[positions], self.ids[positions])

    def d2_block(self, lo, hi):
        """Squared distances of rows [lo, hi) against all points.

        Small collections accumulate per dimension in index order,
        bit-identical to a plain per-pair summation loop; large ones take the
        |a|^2+|b|^2-2ab shortcut through BLAS, which is a few orders faster
        and accurate to rounding (ordering semantics are unchanged on data in
        general position).
        """
        if self.n > _DENSE_LIMIT:
            if self._sq is None:
                self._sq = np.einsum("ij,ij->i", self.X, self.X)
            out = self._sq[lo:hi, None] + self._sq[None, :] - 2.0 * (self.X[lo:hi] @ self.X.T)
            return np.maximum(out, 0.0, out=out)
        out = np.zeros((hi - lo, self.n), dtype=np.float64)
        for j in range(self.m):
            diff = self.X[lo:hi, j : j + 1] - self.X[:, j]
            out += diff * diff
        return out

    def d2_full(self):
        if self._full_d2 is None:
            self._full_d2 = self.d2_block(0, self.n)
        return self._full_d2

    def d2_row(self, i):
        if self._full_d2 is not None:
            return self._full_d2[i].copy()
        return self.d2_block(i, i + 1)[0]

    def blocks(self):
        """Yield (lo, hi, d2) over all rows, reusing the dense cache if present."""
        dense = self.n <= _DENSE_LIMIT
        for lo in range(0, self.n, _BLOCK):
            hi = min(lo + _BLOCK, self.n)
            yield lo, hi, self.d2_full()[lo:hi] if dense else self.d2_block(lo, hi)

    def knn_table(self, k):
        """(n, k) positions of each point's k nearest others, (distance, id) order.

        Dense collections use a full stable sort, honoring the id tie-break
        exactly; larger ones preselect candidates with argpartition, which
        resolves exact distance ties at the k boundary arbitrarily (but
        deterministically).
        """
        if k >= self.n:
            raise ValueError(f"k={k} must be below the collection size {self.n}")
        table = np.empty((self.n, k), dtype=np.int64)
        dense = self.n <= _DENSE_LIMIT
        for lo, hi, d2 in self.blocks():
            d2 = d2.copy() if dense else d2
            d2[np.arange(hi - lo), np.arange(lo, hi)] = np.inf
            if dense:
                table[lo:hi] = np.argsort(d2, axis=1, kind="stable")[:, :k]
            else:
                width = min(self.n - 1, k + 8)
                cand = np.argpartition(d2, width - 1, axis=1)[:, :width]
                cand.sort(axis=1)  # ascending position, so the stable sort keeps id order on ties
                cd = np.take_along_axis(d2, cand, axis=1)
                table[lo:hi] = np.take_along_axis(
                    cand, np.argsort(cd, axis=1, kind="stable")[:, :k], axis=1
                )
        return table

    def nearest_enemy(self):
        """Per point: (squared distance, position) of the closest other-class point."""
        if self.n_classes < 2:
            raise ValueError("nearest enemy undefined on a single-class collection")
        ne_d2 = np.empty(self.n)
        ne_pos = np.empty(self.n, dtype=np.int64)
        for lo, hi, d2 in self.blocks():
            d2 = d2.copy()
            d2[self.y[lo:hi, None] == self.y[None, :]] = np.inf
            ne_pos[lo:hi] = np.argmin(d2, axis=1)  # first minimum = lowest id
            ne_d2[lo:hi] = d2[np.arange(hi - lo), ne_pos[lo:hi]]
        return ne_d2, ne_pos

    def position_of(self, point_id):
        hits = np.nonzero(self.ids == point_id)[0]
        if not len(hits):
            raise ValueError(f"point id {point_id} not in collection")
        return int(hits[0])


class NeighborIndex:
    """k-nearest-neighbor queries over a fixed collection.

    Neighbor lists exclude the query point and are ordered by ascending
    distance, then ascending id. Collections up to a few thousand points keep
    the full pairwise distance matrix; larger ones answer row by row.
    """

    def __init__(self, points, k):
        self.k = k
        self._ws = _Points(points)

    def neighbors(self, point_id, k=None):
        """Ids of the k nearest other points of ``point_id``."""
        k = self.k if k is None else k
        ws = self._ws
        pos = ws.position_of(point_id)
        d2 = ws.d2_row(pos)
        d2[pos] = np.inf
        order = np.argsort(d2, kind="stable")[:k]
        return [int(ws.ids[p]) for p in order]


def _vote_seq(labels):
    """Majority over an ordered neighbor label sequence, nearest tied class wins."""
    counts = {}
    for lbl in labels:
        counts[lbl] = counts.get(lbl, 0) + 1
    best = max(counts.values())
    for lbl in labels:
        if counts[lbl] == best:
            return lbl


def _vote_rows(neigh_labels, n_classes):
    """Row-wise majority vote with the nearest-tied-class rule, vectorized."""
    rows, k = neigh_labels.shape
    counts = np.zeros((rows, n_classes), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(rows), k), neigh_labels.ravel()), 1)
    winner = counts.argmax(axis=1)
    maxc = counts[np.arange(rows), winner]
    tied = (counts == maxc[:, None]).sum(axis=1) > 1
    for r in np.nonzero(tied)[0]:
        for lbl in neigh_labels[r]:
            if counts[r, lbl] == maxc[r]:
                winner[r] = lbl
                break
    return winner


def _enn_keep_mask(ws, k):
    table = ws.knn_table(k)
    votes = _vote_rows(ws.y[table], ws.n_classes)
    return votes == ws.y


def enn(points, k):
    """Edited nearest neighbor: drop points contradicting their neighborhood.

    One pass over the full input; a point is removed when its label differs
    from the majority label of its k nearest neighbors (all neighborhoods are
    computed on the original collection, removals do not cascade).
    """
    t0 = time.monotonic()
    ws = _Points(points)
    if k >= ws.n:
        raise ValueError(f"enn needs more than k={k} points, got {ws.n}")
    keep = _enn_keep_mask(ws, k)
    return SelectionResult(
        selected=frozenset(int(i) for i in ws.ids[keep]),
        algorithm="ENN",
        params={"k": k},
        wall_time=time.monotonic() - t0,
    )


class _NeighborLists:
    """Incrementally maintained (k+1)-nearest retained neighbor lists.

    Invariant: for every retained point p, ``nb[p]`` holds its k+1 nearest
    retained points in (distance, id) order. ``holders[q]`` tracks who lists
    q. Candidate queues are seeded from a k-NN table and topped up by an
    exact bounded rescan when they run dry.
    """

    def __init__(self, ws, k):
        self.ws = ws
        self.k = k
        self.retained = np.ones(ws.n, dtype=bool)
        self.retained_count = ws.n
        seed_width = min(ws.n - 1, max(4 * (k + 1), 32))
        table = ws.knn_table(seed_width)
        self.cand = [list(map(int, row)) for row in table]
        self.ptr = [0] * ws.n
        self.nb = [None] * ws.n
        self.holders = [set() for _ in range(ws.n)]
        for p in range(ws.n):
            self.nb[p] = self._pull(p, k + 1)
            for q in self.nb[p]:
                self.holders[q].add(p)

    def _pull(self, p, count):
        got = []
        while len(got) < count:
            if self.ptr[p] >= len(self.cand[p]):
                self._rescan(p)
                if not self.cand[p]:
                    break  # fewer retained points left than requested
            q = self.cand[p][self.ptr[p]]
            self.ptr[p] += 1
            if self.retained[q]:
                got.append(q)
        return got

    def _rescan(self, p):
        d2 = self.ws.d2_row(p)
        d2[p] = np.inf
        d2[~self.retained] = np.inf
        if self.nb[p]:
            d2[self.nb[p]] = np.inf
        finite = int(np.isfinite(d2).sum())
        if finite == 0:
            self.cand[p] = []
            self.ptr[p] = 0
            return
        width = min(finite, 64)
        cand = np.argpartition(d2, width - 1)[:width]
        cand.sort()  # ascending position, stable sort below keeps id order on ties
        cand = cand[np.argsort(d2[cand], kind="stable")]
        self.cand[p] = [int(q) for q in cand]
        self.ptr[p] = 0

    def remove(self, x):
        self.retained[x] = False
        self.retained_count -= 1
        for q in self.nb[x]:
            self.holders[q].discard(x)
        self.nb[x] = []
        for p in list(self.holders[x]):
            self.nb[p].remove(x)
            fresh = self._pull(p, 1)
            if fresh:
                self.nb[p].append(fresh[0])  # next-nearest retained, joins at the tail
                self.holders[fresh[0]].add(p)
        self.holders[x] = set()

    def associates(self, x):
        """Retained points currently holding x among their k nearest."""
        return [p for p in self.holders[x] if x in self.nb[p][: self.k]]


def drop3(points, k):
    """Decremental reduction: ENN prefilter, then cautious interior removal.

    Survivors of the ENN pass are visited farthest-from-border first
    (descending distance to their nearest enemy, ties by ascending id). A
    visited point x is removed exactly when every associate (a point holding
    x among its k nearest retained neighbors) is still classified correctly
    by its k-neighbor vote once x is gone. Neighbor and associate lists are
    maintained incrementally; the retained set never shrinks below k+2 points
    so every list keeps k+1 members.
    """
    t0 = time.monotonic()
    ws = _Points(points)
    if ws.n <= k + 1:
        raise ValueError(f"drop3 needs more than k+1={k + 1} points, got {ws.n}")
    if ws.n_classes < 2:
        return SelectionResult(
            selected=frozenset(int(i) for i in ws.ids),
            algorithm="DROP3",
            params={"k": k},
            wall_time=time.monotonic() - t0,
            warnings=("single-class input, nothing to reduce",),
        )

    keep = _enn_keep_mask(ws, k)
    if not keep.any():
        keep[:] = True  # a filter that rejects everything is no filter
    fws = ws.take(np.nonzero(keep)[0])
    if fws.n_classes < 2 or fws.n < k + 2:
        return SelectionResult(
            selected=frozenset(int(i) for i in fws.ids),
            algorithm="DROP3",
            params={"k": k},
            wall_time=time.monotonic() - t0,
            warnings=("degenerate collection after noise filter",)
            if fws.n_classes < 2
            else (),
        )

    ne_d2, _ = fws.nearest_enemy()
    visit = sorted(range(fws.n), key=lambda p: (-ne_d2[p], p))
    lists = _NeighborLists(fws, k)
    y = fws.y

    for x in visit:
        if lists.retained_count <= k + 2:
            break
        blocked = False
        for a in lists.associates(x):
            without = [q for q in lists.nb[a] if q != x][: k]
            if _vote_seq([y[q] for q in without]) != y[a]:
                blocked = True
                break
        if not blocked:
            lists.remove(x)

    kept = np.nonzero(lists.retained)[0]
    return SelectionResult(
        selected=frozenset(int(fws.ids[p]) for p in kept),
        algorithm="DROP3",
        params={"k": k},
        wall_time=time.monotonic() - t0,
    )


def _coverage_reachable_sizes(ws):
    """Per point: coverage size, reachable size (both exclude the point itself)."""
    ne_d2, _ = ws.nearest_enemy()
    cov = np.zeros(ws.n, dtype=np.int64)
    reach = np.zeros(ws.n, dtype=np.int64)
    for lo, hi, d2 in ws.blocks():
        inside = d2 < ne_d2[lo:hi, None]  # row y: which columns sit inside y's enemy radius
        cov[lo:hi] = inside.sum(axis=1) - 1  # the diagonal (distance 0) is the point itself
        reach += inside.sum(axis=0)
    reach -= 1
    return cov, reach


def coverage_reachable(points, x_id):
    """Coverage and reachable sets of one point, as id frozensets.

    coverage(x) holds every other point strictly inside x's nearest-enemy
    radius; reachable(x) holds every point whose coverage contains x. Needs at
    least two classes, so that every point has an enemy.
    """
    ws = _Points(points)
    ne_d2, _ = ws.nearest_enemy()
    pos = ws.position_of(x_id)
    row = ws.d2_row(pos)
    coverage = frozenset(
        int(ws.ids[q]) for q in np.nonzero(row < ne_d2[pos])[0] if q != pos
    )
    reachable = frozenset(
        int(ws.ids[q]) for q in np.nonzero(row < ne_d2)[0] if q != pos
    )
    return coverage, reachable


def local_set(points, x_id):
    """Points strictly closer to x than x's nearest enemy; always contains x."""
    ws = _Points(points)
    ne_d2, _ = ws.nearest_enemy()
    pos = ws.position_of(x_id)
    row = ws.d2_row(pos)
    return frozenset(int(ws.ids[q]) for q in np.nonzero(row < ne_d2[pos])[0])


def icf(points, k):
    """Iterative case filtering: ENN prefilter, then prune high-reach points.

    Each round recomputes coverage/reachable sizes on the current set and
    removes every point whose reachable set outnumbers its coverage set; the
    loop stops at the first round with no removals. A round can never remove
    everything (summed reachable equals summed coverage), so the result is
    non-empty and the loop terminates within |points| rounds.
    """
    t0 = time.monotonic()
    ws = _Points(points)
    if k >= ws.n:
        raise ValueError(f"icf needs more than k={k} points, got {ws.n}")
    if ws.n_classes < 2:
        return SelectionResult(
            selected=frozenset(int(i) for i in ws.ids),
            algorithm="ICF",
            params={"k": k},
            wall_time=time.monotonic() - t0,
            warnings=("single-class input, nothing to filter",),
        )

    warnings = ()
    keep = _enn_keep_mask(ws, k)
    if not keep.any():
        keep[:] = True  # a filter that rejects everything is no filter
    cws = ws.take(np.nonzero(keep)[0])
    while True:
        if cws.n_classes < 2:
            warnings = ("single class after filtering, returning it unchanged",)
            break
        cov, reach = _coverage_reachable_sizes(cws)
        marked = reach > cov
        if not marked.any():
            break
        cws = cws.take(np.nonzero(~marked)[0])
    return SelectionResult(
        selected=frozenset(int(i) for i in cws.ids),
        algorithm="ICF",
        params={"k": k},
        wall_time=time.monotonic() - t0,
        warnings=warnings,
    )


def _usefulness_harmfulness(ws):
    ne_d2, ne_pos = ws.nearest_enemy()
    h = np.bincount(ne_pos, minlength=ws.n)
    u = np.zeros(ws.n, dtype=np.int64)
    for lo, hi, d2 in ws.blocks():
        u += (d2 < ne_d2[lo:hi, None]).sum(axis=0)  # column q: q sits in row's local set
    return u, h


def lssm(points):
    """Local-set smoother: keep x when usefulness reaches harmfulness.

    usefulness(x) counts points whose local set contains x (including x
    itself, so it is at least 1); harmfulness(x) counts points whose nearest
    enemy is x. Single-class input comes back unchanged with a warning.
    """
    t0 = time.monotonic()
    ws = _Points(points)
    if ws.n_classes < 2:
        return SelectionResult(
            selected=frozenset(int(i) for i in ws.ids),
            algorithm="LSSm",
            wall_time=time.monotonic() - t0,
            warnings=("single-class input, local sets undefined",),
        )
    u, h = _usefulness_harmfulness(ws)
    return SelectionResult(
        selected=frozenset(int(i) for i in ws.ids[u >= h]),
        algorithm="LSSm",
        wall_time=time.monotonic() - t0,
    )


def lsbo(points):
    """Local-set border selector: smooth with lssm, then keep set-cover seeds.

    Local sets are recomputed on the smoothed collection. Points are visited
    in ascending local-set size (ties by ascending id) and included exactly
    when no already-included point lies strictly inside their nearest-enemy
    radius, which favors border points.
    """
    t0 = time.monotonic()
    ws = _Points(points)
    if ws.n_classes < 2:
        return SelectionResult(
            selected=frozenset(int(i) for i in ws.ids),
            algorithm="LSBo",
            wall_time=time.monotonic() - t0,
            warnings=("single-class input, local sets undefined",),
        )
    u, h = _usefulness_harmfulness(ws)
    fws = ws.take(np.nonzero(u >= h)[0])
    if fws.n_classes < 2:
        return SelectionResult(
            selected=frozenset(int(i) for i in fws.ids),
            algorithm="LSBo",
            wall_time=time.monotonic() - t0,
            warnings=("single class after smoothing, returning it unchanged",),
        )

    ne_d2, _ = fws.nearest_enemy()
    ls_size = np.zeros(fws.n, dtype=np.int64)
    for lo, hi, d2 in fws.blocks():
        ls_size[lo:hi] = (d2 < ne_d2[lo:hi, None]).sum(axis=1)

    chosen = []
    sel_X = np.empty((fws.n, fws.m))
    for p in sorted(range(fws.n), key=lambda q: (ls_size[q], q)):
        if chosen:
            d2 = np.zeros(len(chosen))
            for j in range(fws.m):
                diff = sel_X[: len(chosen), j] - fws.X[p, j]
                d2 += diff * diff
            if (d2 < ne_d2[p]).any():
                continue  # an already-selected point sits inside p's local set
        sel_X[len(chosen)] = fws.X[p]
        chosen.append(p)
    return SelectionResult(
        selected=frozenset(int(fws.ids[p]) for p in chosen),
        algorithm="LSBo",
        wall_time=time.monotonic() - t0,
    )


def run_selector(name, points, k=3):
    """Dispatch a selector by CLI name; "none" passes the collection through."""
    if name == "none":
        t0 = time.monotonic()
        return SelectionResult(
            selected=frozenset(p.id for p in points),
            algorithm="none",
            wall_time=time.monotonic() - t0,
        )
    if name == "enn":
        return enn(points, k)
    if name == "drop3":
        return drop3(points, k)
    if name == "icf":
        return icf(points, k)
    if name == "lssm":
        return lssm(points)
    if name == "lsbo":
        return lsbo(points)
    raise ValueError(f"unknown selector {name!r}; expected one of {SELECTOR_NAMES}")
