"""Inter-class similarity S by Monte-Carlo and the Bray-Curtis class graph W."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import EmbeddedDataset, stratified_sample
from .density import DensityParams, EvaluationCounter, class_likelihood_matrix, evaluations
from .exceptions import DataError

THREADS_ENV = "CSG_THREADS"


def thread_count(threads: int | None = None) -> int:
    """Explicit ``threads``, else ``$CSG_THREADS``, else the CPU count."""
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise DataError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise DataError(f"thread count must be >= 1, got {threads}")
    return threads


@dataclass(frozen=True)
class SimilarityParams:
    """M: Monte-Carlo samples per class. seed: 64-bit integer."""

    M: int = 100
    seed: int = 0
    density: DensityParams = field(default_factory=DensityParams)

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise DataError(f"M must be a positive integer, got {self.M}")


@dataclass(frozen=True)
class SimilarityMatrix:
    """Row ``i`` is the mean likelihood vector of class ``i``'s samples."""

    entries: np.ndarray
    effective_M: np.ndarray
    evaluations: int


@dataclass(frozen=True)
class AdjacencyMatrix:
    entries: np.ndarray

    @property
    def K(self) -> int:
        return self.entries.shape[0]


def _class_row(ds, rows, params, counter):
    q = class_likelihood_matrix(ds.points[rows], ds, params.density, exclude=rows,
                                counter=counter)
    # fixed-order accumulation keeps the mean independent of scheduling
    acc = np.zeros(ds.K)
    for v in q:
        acc += v
    return acc / len(rows)


def monte_carlo_similarity(ds: EmbeddedDataset, params: SimilarityParams = SimilarityParams(),
                           threads: int | None = None) -> SimilarityMatrix:
    """Estimate the K x K similarity matrix.

    For every class ``i``, ``min(M, |C_i|)`` members are drawn without
    replacement; row ``i`` of S averages their normalized likelihood vectors
    over all K classes, each sample being left out of its own class pool.
    Classes are processed in parallel when ``threads > 1``; the result is
    bit-identical for any thread count.
    """
    samples = stratified_sample(ds, params.M, params.seed)
    counter = EvaluationCounter()
    n = thread_count(threads)
    if n == 1 or ds.K == 1:
        rows = [_class_row(ds, s, params, counter) for s in samples]
    else:
        with ThreadPoolExecutor(max_workers=min(n, ds.K)) as pool:
            rows = list(pool.map(lambda s: _class_row(ds, s, params, counter), samples))
    evaluations.add(counter.value)
    effective = np.array([len(s) for s in samples], dtype=np.int64)
    return SimilarityMatrix(np.vstack(rows), effective, counter.value)


def bray_curtis_adjacency(S) -> AdjacencyMatrix:
    """Adjacency ``w_ij = 1 - sum_k |S_ki - S_kj| / sum_k |S_ki + S_kj|``.

    Class signatures are the *columns* of S. Two all-zero columns are
    treated as identical (``w = 1``).

    Parameters
    ----------
    S : SimilarityMatrix or (K, K) array_like
        Non-negative entries.
    """
    S = np.asarray(S.entries if isinstance(S, SimilarityMatrix) else S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DataError(f"S must be square, got shape {S.shape}")
    if np.any(S < 0) or not np.all(np.isfinite(S)):
        raise DataError("S must have finite, non-negative entries")
    cols = S.T
    num = np.abs(cols[:, None, :] - cols[None, :, :]).sum(axis=2)
    den = np.abs(cols[:, None, :] + cols[None, :, :]).sum(axis=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        W = np.where(den > 0, 1.0 - num / np.where(den > 0, den, 1.0), 1.0)
    np.fill_diagonal(W, 1.0)
    W = np.clip(W, 0.0, 1.0)
    return AdjacencyMatrix(W)
