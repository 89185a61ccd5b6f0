"""Ho-Basu reference complexity measures F1, N1, N2, N3 and T2.

F1 and N2 are two-class measures and are averaged over all class pairs on
multi-class data. N1 and N3 are computed directly on the whole dataset,
T2 is ``N / d``. All distances are Euclidean, computed pair by pair so
that blocked and full-matrix evaluations agree bit for bit.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dataset import EmbeddedDataset
from .exceptions import DataError

MEASURES = ("f1", "n1", "n2", "n3", "t2")

_BLOCK_ELEMENTS = 1 << 22


def distance_blocks(X: np.ndarray, Y: np.ndarray | None = None):
    """Yield ``(start, D)`` with ``D[i, j] = |X[start + i] - Y[j]|_2``."""
    X = np.asarray(X, dtype=np.float64)
    Y = X if Y is None else np.asarray(Y, dtype=np.float64)
    step = max(1, _BLOCK_ELEMENTS // max(1, len(Y) * X.shape[1]))
    for start in range(0, len(X), step):
        diff = X[start:start + step, None, :] - Y[None, :, :]
        yield start, np.sqrt(np.sum(diff * diff, axis=2))


def _pair(ds: EmbeddedDataset, a: int, b: int) -> EmbeddedDataset:
    rows = np.sort(np.concatenate([ds.members(a), ds.members(b)]))
    labels = (ds.labels[rows] == b).astype(np.int64)
    return EmbeddedDataset(ds.points[rows], labels, (ds.class_names[a], ds.class_names[b]))


def f1(ds: EmbeddedDataset) -> float:
    """Maximum per-feature Fisher ratio ``(mu1 - mu2)^2 / (s1^2 + s2^2)``.

    Variances use denominator n. A feature with zero pooled variance gives
    0 if the means agree and ``inf`` (the degenerate sentinel) otherwise.
    """
    if ds.K != 2:
        raise DataError(f"f1 is a two-class measure, got K={ds.K}")
    a, b = (ds.points[ds.members(c)] for c in range(2))
    if len(a) < 2 or len(b) < 2:
        raise DataError("f1 needs at least 2 points per class")
    num = (a.mean(axis=0) - b.mean(axis=0)) ** 2
    den = a.var(axis=0) + b.var(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0),
                         np.where(num > 0, np.inf, 0.0))
    return float(ratio.max())


def minimum_spanning_tree(X) -> np.ndarray:
    """Euclidean MST by Prim's algorithm, as an (N-1, 2) array of edges.

    Vertices join in order of their attachment cost, equal costs going to
    the lower row index; a vertex keeps its first cheapest parent.
    """
    X = np.asarray(X, dtype=np.float64)
    n = len(X)
    in_tree = np.zeros(n, dtype=bool)
    key = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    edges = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    u = 0
    for step in range(n):
        in_tree[u] = True
        if step:
            edges[step - 1] = parent[u], u
        diff = X - X[u]
        dist = np.sqrt(np.sum(diff * diff, axis=1))
        better = ~in_tree & (dist < key)
        key[better] = dist[better]
        parent[better] = u
        if step == n - 1:
            break
        u = int(np.argmin(np.where(in_tree, np.inf, key)))
    return edges


def n1(ds: EmbeddedDataset) -> float:
    """Fraction of points incident to an MST edge joining different classes."""
    if ds.N < 2:
        raise DataError("n1 needs at least 2 points")
    edges = minimum_spanning_tree(ds.points)
    cross = ds.labels[edges[:, 0]] != ds.labels[edges[:, 1]]
    touched = np.zeros(ds.N, dtype=bool)
    touched[edges[cross].ravel()] = True
    return float(touched.sum() / ds.N)


def nearest_neighbor_distances(ds: EmbeddedDataset) -> tuple[np.ndarray, np.ndarray]:
    """Per point: distance to the nearest same-class and other-class point."""
    intra = np.full(ds.N, np.inf)
    inter = np.full(ds.N, np.inf)
    for start, D in distance_blocks(ds.points):
        rows = np.arange(start, start + len(D))
        D[rows - start, rows] = np.inf
        same = ds.labels[rows][:, None] == ds.labels[None, :]
        intra[rows] = np.where(same, D, np.inf).min(axis=1)
        inter[rows] = np.where(same, np.inf, D).min(axis=1)
    return intra, inter


def n2(ds: EmbeddedDataset) -> float:
    """Sum of intra-class NN distances over sum of inter-class NN distances.

    Returns ``inf`` (sentinel) when the inter-class sum is zero.
    """
    if ds.K < 2:
        raise DataError("n2 needs at least 2 classes")
    if np.any(ds.class_sizes() < 2):
        raise DataError("n2 needs at least 2 points per class")
    intra, inter = nearest_neighbor_distances(ds)
    den = float(inter.sum())
    if den == 0.0:
        return math.inf
    return float(intra.sum()) / den


def nearest_neighbors(ds: EmbeddedDataset) -> np.ndarray:
    """Leave-one-out nearest neighbour of every row (ties: lowest index)."""
    nn = np.empty(ds.N, dtype=np.int64)
    for start, D in distance_blocks(ds.points):
        rows = np.arange(start, start + len(D))
        D[rows - start, rows] = np.inf
        nn[rows] = np.argmin(D, axis=1)
    return nn


def n3(ds: EmbeddedDataset) -> float:
    """Leave-one-out error rate of the 1-nearest-neighbour classifier."""
    if ds.N < 2:
        raise DataError("n3 needs at least 2 points")
    nn = nearest_neighbors(ds)
    return float(np.mean(ds.labels[nn] != ds.labels))


def t2(ds: EmbeddedDataset) -> float:
    """Samples per dimension, ``N / d``."""
    return ds.N / ds.d


@dataclass(frozen=True)
class PairwiseMean:
    """Mean of a two-class measure over all class pairs.

    Infinite (sentinel) pair values are left out of ``value`` and counted in
    ``excluded``; ``value`` is ``inf`` if every pair was excluded.
    """

    value: float
    pair_count: int
    excluded: int
    per_pair: dict = field(default_factory=dict)


def multiclass_average(measure: Callable[[EmbeddedDataset], float],
                       ds: EmbeddedDataset) -> PairwiseMean:
    if ds.K < 2:
        raise DataError("multiclass_average needs K >= 2")
    per_pair = {}
    for a, b in itertools.combinations(range(ds.K), 2):
        per_pair[(ds.class_names[a], ds.class_names[b])] = measure(_pair(ds, a, b))
    finite = [v for v in per_pair.values() if math.isfinite(v)]
    excluded = len(per_pair) - len(finite)
    if excluded:
        warnings.warn(f"{getattr(measure, '__name__', 'measure')}: {excluded} of "
                      f"{len(per_pair)} class pairs are degenerate (infinite) and were "
                      "left out of the mean", RuntimeWarning, stacklevel=2)
    value = float(np.mean(finite)) if finite else math.inf
    return PairwiseMean(value, len(per_pair), excluded, per_pair)


@dataclass
class BaselineScores:
    f1: float | None = None
    n1: float | None = None
    n2: float | None = None
    n3: float | None = None
    t2: float | None = None
    pairwise: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {m: getattr(self, m) for m in MEASURES if getattr(self, m) is not None}
        if self.pairwise:
            out["pairwise"] = {
                m: {
                    "pair_count": pm.pair_count,
                    "excluded": pm.excluded,
                    "pairs": [{"classes": list(k), "value": v} for k, v in pm.per_pair.items()],
                }
                for m, pm in self.pairwise.items()
            }
        return out


def baseline_scores(ds: EmbeddedDataset, measures=MEASURES) -> BaselineScores:
    """Compute the requested subset of F1, N1, N2, N3, T2."""
    measures = [m.lower() for m in measures]
    unknown = sorted(set(measures) - set(MEASURES))
    if unknown:
        raise DataError(f"unknown measures {unknown}; choose from {list(MEASURES)}")
    scores = BaselineScores()
    for name in MEASURES:
        if name not in measures:
            continue
        if name in ("f1", "n2"):
            pm = multiclass_average(f1 if name == "f1" else n2, ds)
            scores.pairwise[name] = pm
            setattr(scores, name, pm.value)
        else:
            setattr(scores, name, {"n1": n1, "n3": n3, "t2": t2}[name](ds))
    return scores


def pearson(xs, ys, permutations: int = 10_000, seed: int = 0) -> tuple[float, float]:
    """Pearson r and a two-sided permutation p-value.

    The p-value is ``(1 + #{|r_perm| >= |r|}) / (1 + permutations)`` over
    seeded shuffles of ``ys``.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DataError("pearson needs two vectors of equal length")
    if len(x) < 3:
        raise DataError("pearson needs at least 3 points")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = math.sqrt(float(xc @ xc))
    sy = math.sqrt(float(yc @ yc))
    if sx == 0.0 or sy == 0.0:
        raise DataError("correlation is undefined for a constant vector")
    r = float(xc @ yc) / (sx * sy)
    r = max(-1.0, min(1.0, r))
    if permutations < 1:
        return r, math.nan
    rng = np.random.default_rng(seed)
    perms = np.array([rng.permutation(yc) for _ in range(permutations)])
    r_perm = perms @ xc / (sx * sy)
    hits = int(np.sum(np.abs(r_perm) >= abs(r) - 1e-12))
    return r, (hits + 1) / (permutations + 1)
