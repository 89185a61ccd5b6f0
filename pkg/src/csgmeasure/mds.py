"""Two-dimensional class maps by classical (Torgerson) MDS of ``1 - W``."""
from __future__ import annotations

import csv
import io

from dataclasses import dataclass

import numpy as np

from .similarity import AdjacencyMatrix


@dataclass(frozen=True)
class ClassMap:
    coordinates: np.ndarray
    stress: float
    class_names: tuple


def classical_mds(W, class_names=None) -> ClassMap:
    """Embed the classes of ``W`` in the plane.

    Dissimilarities ``1 - w_ij`` are squared and double-centered; the two
    leading eigenvectors of the result, scaled by the square roots of their
    (clamped) eigenvalues, give the coordinates. Each axis is oriented so
    its largest-magnitude coordinate is positive.

    ``stress`` is ``sum_{i<j} (|y_i - y_j| - D_ij)^2 / sum_{i<j} D_ij^2``
    (zero when all dissimilarities vanish).
    """
    W = np.asarray(W.entries if isinstance(W, AdjacencyMatrix) else W, dtype=np.float64)
    K = len(W)
    if class_names is None:
        class_names = tuple(str(i) for i in range(K))
    D = 1.0 - W
    np.fill_diagonal(D, 0.0)
    J = np.eye(K) - np.ones((K, K)) / K
    B = -0.5 * J @ (D ** 2) @ J
    B = 0.5 * (B + B.T)

    evals, evecs = np.linalg.eigh(B)
    order = np.argsort(evals)[::-1][:2]
    evals = np.maximum(evals[order], 0.0)
    Y = evecs[:, order] * np.sqrt(evals)
    if Y.shape[1] < 2:
        Y = np.hstack([Y, np.zeros((K, 2 - Y.shape[1]))])
    for axis in range(2):
        col = Y[:, axis]
        if col[np.argmax(np.abs(col))] < 0:
            Y[:, axis] = -col
    Y -= Y.mean(axis=0)

    iu = np.triu_indices(K, 1)
    fitted = np.sqrt(((Y[:, None, :] - Y[None, :, :]) ** 2).sum(axis=2))[iu]
    target = D[iu]
    denom = float(np.sum(target ** 2))
    stress = float(np.sum((fitted - target) ** 2) / denom) if denom > 0 else 0.0
    return ClassMap(Y, stress, tuple(class_names))


def class_map_csv(cmap: ClassMap) -> str:
    """``class,x,y`` rows preceded by a ``# stress=...`` comment line."""
    buf = io.StringIO()
    buf.write(f"# stress={cmap.stress!r}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["class", "x", "y"])
    for name, (x, y) in zip(cmap.class_names, cmap.coordinates):
        writer.writerow([name, repr(float(x)), repr(float(y))])
    return buf.getvalue()
