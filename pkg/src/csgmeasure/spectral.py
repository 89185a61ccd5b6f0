"""Class-graph Laplacian, its spectrum, and the cumulative spectral gradient."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dataset import EmbeddedDataset
from .exceptions import DataError, NumericalError
from .report import FORMAT_VERSION, ComplexityReport
from .similarity import AdjacencyMatrix, SimilarityParams, bray_curtis_adjacency, \
    monte_carlo_similarity

SYMMETRY_TOL = 1e-12
NEGATIVE_TOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """Ascending Laplacian eigenvalues and their position-normalized gaps."""

    eigenvalues: np.ndarray
    gaps: np.ndarray


@dataclass(frozen=True)
class CsgResult:
    csg: float
    spectrum: Spectrum
    cummax_profile: np.ndarray


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A.entries if isinstance(A, AdjacencyMatrix) else A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DataError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix has non-finite entries")
    return A


def _check_symmetric(A: np.ndarray) -> None:
    asym = np.max(np.abs(A - A.T)) if A.size else 0.0
    if asym > SYMMETRY_TOL:
        raise DataError(f"matrix is not symmetric (max |A - A^T| = {asym:.3g})")


def laplacian(W) -> np.ndarray:
    """Unnormalized Laplacian ``D - W``; self-loops cancel out."""
    W = _as_matrix(W)
    _check_symmetric(W)
    if np.any(W < 0):
        raise DataError("adjacency weights must be non-negative")
    L = -W.copy()
    np.fill_diagonal(L, 0.0)
    off = W - np.diag(np.diag(W))
    L[np.diag_indices_from(L)] = off.sum(axis=1)
    return L


def eigenvalues_symmetric(A, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.

    Sweeps until the off-diagonal Frobenius norm drops to ``tol * ||A||_F``.

    Raises
    ------
    DataError
        If ``A`` is not symmetric within 1e-12.
    NumericalError
        If ``max_sweeps`` sweeps do not converge.
    """
    a = _as_matrix(A).copy()
    _check_symmetric(a)
    n = len(a)
    a = 0.5 * (a + a.T)
    target = tol * math.sqrt(float(np.sum(a * a)))

    mask = ~np.eye(n, dtype=bool)

    def off_norm():
        return math.sqrt(float(np.sum(a[mask] ** 2)))

    for _ in range(max_sweeps):
        if off_norm() <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    # theta would overflow; t ~ 1 / (2 theta)
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :]
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
    else:
        if off_norm() > target:
            raise NumericalError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm "
                f"{off_norm():.3g} > {target:.3g})")
    return np.sort(np.diag(a))


def normalized_eigengaps(eigenvalues, K: int | None = None) -> np.ndarray:
    """``(lam[i+1] - lam[i]) / (K - i)`` for ``i = 0 .. K-2``."""
    lam = np.asarray(eigenvalues, dtype=np.float64)
    K = len(lam) if K is None else K
    if len(lam) != K:
        raise DataError(f"expected {K} eigenvalues, got {len(lam)}")
    if np.any(np.diff(lam) < 0):
        raise DataError("eigenvalues must be ascending")
    return np.diff(lam) / (K - np.arange(K - 1))


def csg(gaps) -> tuple[float, np.ndarray]:
    """Sum of the running maximum of ``gaps``. Returns ``(csg, cummax)``."""
    gaps = np.asarray(gaps, dtype=np.float64)
    if np.any(gaps < 0):
        raise DataError("normalized gaps must be non-negative")
    profile = np.maximum.accumulate(gaps) if len(gaps) else gaps
    return float(profile.sum()), profile


def spectrum_of(W) -> Spectrum:
    """Clamped Laplacian spectrum of ``W`` and its normalized gaps."""
    lam = eigenvalues_symmetric(laplacian(W))
    if lam[0] < -NEGATIVE_TOL:
        raise NumericalError(f"Laplacian has a negative eigenvalue {lam[0]:.3g}")
    lam = np.maximum(lam, 0.0)
    if lam[0] > NEGATIVE_TOL:
        raise NumericalError(f"smallest Laplacian eigenvalue {lam[0]:.3g} is not zero")
    return Spectrum(lam, normalized_eigengaps(lam))


def csg_from_adjacency(W) -> CsgResult:
    spec = spectrum_of(W)
    value, profile = csg(spec.gaps)
    return CsgResult(value, spec, profile)


def csg_pipeline(ds: EmbeddedDataset, params: SimilarityParams = SimilarityParams(),
                 threads: int | None = None) -> ComplexityReport:
    """Full CSG computation: S, W, Laplacian spectrum, then the score.

    Every intermediate is kept in the returned report.
    """
    if ds.K < 2:
        raise DataError("CSG needs at least 2 classes")
    t0 = time.perf_counter()
    S = monte_carlo_similarity(ds, params, threads=threads)
    W = bray_curtis_adjacency(S)
    result = csg_from_adjacency(W)
    elapsed = time.perf_counter() - t0
    return ComplexityReport(
        csg=result.csg,
        eigenvalues=result.spectrum.eigenvalues,
        gaps=result.spectrum.gaps,
        cummax_profile=result.cummax_profile,
        S=S.entries,
        W=W.entries,
        class_names=ds.class_names,
        M=params.M,
        k=params.density.k,
        seed=params.seed,
        epsilon_radius=params.density.epsilon_radius,
        effective_M=S.effective_M,
        evaluation_count=S.evaluations,
        wall_time_seconds=elapsed,
        tool_version=__version__,
        format_version=FORMAT_VERSION,
    )
