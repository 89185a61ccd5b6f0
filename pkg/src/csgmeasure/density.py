"""Class-conditional likelihoods from the k-nearest hypercube estimator.

The density of class ``j`` at a point ``x`` is ``k / (M_j * V)`` where ``M_j``
is the number of points in the class pool and ``V = (2 r)^d`` is the volume
of the smallest axis-aligned hypercube centered at ``x`` holding the ``k``
nearest pool points, i.e. ``r`` is the Chebyshev (L-infinity) distance to the
k-th neighbour.

Per query, the K class densities are normalized to sum to one (a posterior
under a uniform class prior). The normalization is carried out in log space
so that high-dimensional volumes never overflow.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import DataError, NumericalError


@dataclass(frozen=True)
class DensityParams:
    """k: neighbours per estimate. epsilon_radius: floor for a zero radius."""

    k: int = 3
    epsilon_radius: float = 1e-12

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DataError(f"k must be a positive integer, got {self.k}")
        if not self.epsilon_radius > 0:
            raise DataError(f"epsilon_radius must be positive, got {self.epsilon_radius}")


class EvaluationCounter:
    """Thread-safe tally of point-wise density evaluations."""

    def __init__(self):
        self._lock = threading.Lock()
        self._value = 0

    def add(self, n: int) -> None:
        with self._lock:
            self._value += int(n)

    @property
    def value(self) -> int:
        return self._value

    def reset(self) -> None:
        with self._lock:
            self._value = 0


#: Process-wide counter, used when callers do not supply their own.
evaluations = EvaluationCounter()


def chebyshev_distances(query, points) -> np.ndarray:
    query = np.asarray(query, dtype=np.float64).reshape(-1)
    points = np.asarray(points, dtype=np.float64).reshape(-1, len(query))
    return np.max(np.abs(points - query), axis=1)


def knn_radius(query, class_points, k: int, exclude: int | None = None) -> float:
    """Chebyshev distance from ``query`` to its k-th nearest point.

    Parameters
    ----------
    query : (d,) array_like
    class_points : (n, d) array_like
        The class pool.
    k : int
        Clamped to the number of available points.
    exclude : int, optional
        Position in ``class_points`` to leave out of the pool.

    Raises
    ------
    DataError
        If the pool is empty after exclusion.
    """
    dist = chebyshev_distances(query, class_points)
    order = np.arange(len(dist))
    if exclude is not None:
        keep = order != exclude
        dist, order = dist[keep], order[keep]
    if len(dist) == 0:
        raise DataError("empty class pool after exclusion")
    kk = min(int(k), len(dist))
    # ties resolved by position, which leaves the radius unchanged
    ranked = np.lexsort((order, dist))
    return float(dist[ranked[kk - 1]])


def hypercube_density(r: float, k: int, M_class: int, d: int,
                      params: DensityParams = DensityParams()) -> float:
    """``k / (M_class * (2 max(r, eps))^d)``.

    Finite for moderate ``d``; use :func:`log_hypercube_density` when the
    volume may under- or overflow.
    """
    return float(np.exp(log_hypercube_density(r, k, M_class, d, params)))


def log_hypercube_density(r, k, M_class, d: int, params: DensityParams = DensityParams()):
    if np.any(np.asarray(M_class) < 1) or d < 1:
        raise DataError("hypercube_density needs M_class >= 1 and d >= 1")
    r = np.maximum(np.asarray(r, dtype=np.float64), params.epsilon_radius)
    return np.log(k) - np.log(M_class) - d * np.log(2.0 * r)


def class_log_densities(queries, ds, params: DensityParams = DensityParams(),
                        exclude=None, counter: EvaluationCounter | None = None) -> np.ndarray:
    """Raw log densities of every class at every query.

    Parameters
    ----------
    queries : (m, d) array_like
    ds : EmbeddedDataset
    exclude : (m,) array_like of int, optional
        Row of ``ds`` to drop from the pools for each query (``-1`` for none).
        A row only ever belongs to its own class pool.

    Returns
    -------
    (m, K) ndarray
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    m = len(queries)
    if queries.shape[1] != ds.d:
        raise DataError(f"query dimension {queries.shape[1]} != dataset dimension {ds.d}")
    if exclude is None:
        exclude = np.full(m, -1, dtype=np.int64)
    exclude = np.asarray(exclude, dtype=np.int64).reshape(m)
    out = np.empty((m, ds.K))
    rows = np.arange(m)
    for j in range(ds.K):
        members = ds.members(j)
        dist = cdist(queries, ds.points[members], metric="chebyshev")
        pos = np.searchsorted(members, exclude)
        hit = (exclude >= 0) & (pos < len(members))
        hit[hit] = members[pos[hit]] == exclude[hit]
        pool = np.full(m, len(members), dtype=np.int64)
        if hit.any():
            dist[rows[hit], pos[hit]] = np.inf
            pool[hit] -= 1
        if np.any(pool == 0):
            raise DataError(f"class {ds.class_names[j]!r} is empty after excluding the query")
        kk = np.minimum(params.k, pool)
        if np.all(kk == kk[0]):
            r = np.partition(dist, kk[0] - 1, axis=1)[:, kk[0] - 1]
        else:
            r = np.sort(dist, axis=1)[rows, kk - 1]
        out[:, j] = log_hypercube_density(r, kk, pool, ds.d, params)
    if counter is None:
        counter = evaluations
    counter.add(m * ds.K)
    return out


def normalize_log_densities(logp: np.ndarray) -> np.ndarray:
    """Row-wise softmax; each row becomes a likelihood vector summing to 1."""
    logp = np.atleast_2d(logp)
    with np.errstate(invalid="ignore"):
        w = np.exp(logp - logp.max(axis=1, keepdims=True))
    total = w.sum(axis=1, keepdims=True)
    if not np.all(np.isfinite(total)) or np.any(total <= 0):
        raise NumericalError("degenerate densities")
    return w / total


def class_likelihood_matrix(queries, ds, params: DensityParams = DensityParams(),
                            exclude=None, counter: EvaluationCounter | None = None) -> np.ndarray:
    """Normalized class likelihoods for a batch of queries, shape (m, K)."""
    return normalize_log_densities(class_log_densities(queries, ds, params, exclude, counter))


def class_likelihood_vector(query, ds, params: DensityParams = DensityParams(),
                            exclude: int | None = None,
                            counter: EvaluationCounter | None = None) -> np.ndarray:
    """Normalized likelihood of ``query`` under each of the K classes.

    ``exclude`` is a row index of ``ds`` removed from its own class pool,
    used when the query is itself a member of the dataset. Adds K to the
    evaluation counter.
    """
    ex = None if exclude is None else [exclude]
    return class_likelihood_matrix(np.asarray(query, dtype=np.float64)[None, :], ds,
                                   params, ex, counter)[0]
