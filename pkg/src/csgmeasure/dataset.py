"""Labeled embedded datasets: data model, file formats, sampling and synthesis.

Two on-disk formats are supported.

CSV
    Header ``label,f0,...,f{d-1}`` followed by one row per sample.
CSGE binary (little-endian)
    ``b"CSGE"``, u32 version (=1), u64 N, u32 d, u32 K, N u32 labels,
    N*d f32 features (row-major), then K class names each stored as a
    u32 byte length followed by UTF-8 bytes.
"""
from __future__ import annotations

import csv
import io
import math
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .exceptions import DataError

BINARY_MAGIC = b"CSGE"
BINARY_VERSION = 1
_HEADER = struct.Struct("<4sIQII")

_U64 = (1 << 64) - 1


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ClassView:
    """Row indices of the members of one class, strictly increasing."""

    class_index: int
    member_indices: np.ndarray

    def __len__(self) -> int:
        return len(self.member_indices)


@dataclass(frozen=True, eq=False)
class EmbeddedDataset:
    """N points in d dimensions, each tagged with one of K classes.

    Parameters
    ----------
    points : (N, d) array_like
        Embedding coordinates. Stored as read-only float64.
    labels : (N,) array_like of int
        Class index of every row, in ``[0, K)``.
    class_names : sequence of str
        Name of each class; its length defines K. Every class must have
        at least one member.
    """

    points: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...]
    _members: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64, copy=True)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2 or points.shape[1] < 1:
            raise DataError(f"points must be an (N, d) matrix, got shape {points.shape}")
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or len(labels) != len(points):
            raise DataError(
                f"labels must be a vector of length N={len(points)}, got shape {labels.shape}")
        if len(labels) and not np.issubdtype(labels.dtype, np.integer):
            raise DataError("labels must be integer class indices")
        labels = labels.astype(np.int64, copy=True)
        names = tuple(str(n) for n in self.class_names)
        K = len(names)
        if K < 1:
            raise DataError("at least one class is required")
        if len(set(names)) != K:
            raise DataError("class names must be distinct")
        if len(points) == 0:
            raise DataError("dataset is empty")
        if labels.min() < 0 or labels.max() >= K:
            raise DataError(f"labels must lie in [0, {K})")
        if not np.all(np.isfinite(points)):
            bad = int(np.argwhere(~np.isfinite(points))[0, 0])
            raise DataError(f"non-finite coordinate in row {bad}")
        order = np.argsort(labels, kind="stable")
        bounds = np.searchsorted(labels[order], np.arange(K + 1))
        members = tuple(_readonly(order[bounds[c]:bounds[c + 1]].copy()) for c in range(K))
        empty = [names[c] for c in range(K) if len(members[c]) == 0]
        if empty:
            raise DataError(f"classes without members: {empty}")
        object.__setattr__(self, "points", _readonly(points))
        object.__setattr__(self, "labels", _readonly(labels))
        object.__setattr__(self, "class_names", names)
        object.__setattr__(self, "_members", members)

    @property
    def N(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def K(self) -> int:
        return len(self.class_names)

    def members(self, c: int) -> np.ndarray:
        """Sorted row indices of class ``c``."""
        return self._members[c]

    def class_view(self, c: int) -> ClassView:
        return ClassView(c, self._members[c])

    def class_sizes(self) -> np.ndarray:
        return np.array([len(m) for m in self._members], dtype=np.int64)

    def take(self, rows) -> "EmbeddedDataset":
        """Dataset restricted to ``rows``; K and class names are kept."""
        rows = np.asarray(rows, dtype=np.int64)
        return EmbeddedDataset(self.points[rows], self.labels[rows], self.class_names)

    def relabel(self, permutation) -> "EmbeddedDataset":
        """Rename class ``c`` to ``permutation[c]``, carrying its name along."""
        perm = np.asarray(permutation, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.K)):
            raise DataError("relabel expects a permutation of range(K)")
        names = [""] * self.K
        for old, new in enumerate(perm):
            names[new] = self.class_names[old]
        return EmbeddedDataset(self.points, perm[self.labels], names)

    def __eq__(self, other):
        if not isinstance(other, EmbeddedDataset):
            return NotImplemented
        return (self.class_names == other.class_names
                and self.points.shape == other.points.shape
                and np.array_equal(self.labels, other.labels)
                and np.array_equal(self.points, other.points))

    __hash__ = None

    def __repr__(self):
        return f"EmbeddedDataset(N={self.N}, d={self.d}, K={self.K})"


def from_string_labels(points, labels: Sequence[str]) -> EmbeddedDataset:
    """Build a dataset from string labels, numbering classes lexicographically."""
    labels = [str(lab) for lab in labels]
    names = sorted(set(labels))
    index = {name: i for i, name in enumerate(names)}
    return EmbeddedDataset(points, np.array([index[lab] for lab in labels], dtype=np.int64), names)


# --------------------------------------------------------------------------- #
# CSV
# --------------------------------------------------------------------------- #

def load_csv(path) -> EmbeddedDataset:
    """Read a ``label,f0,...`` CSV file.

    Labels are mapped to class indices by lexicographic order of the distinct
    label strings, so ``{"9", "10"}`` becomes ``["10", "9"]``.

    Raises
    ------
    DataError
        On an empty file, a malformed or non-finite row (the message names
        the 1-based line number), or fewer than two classes.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        d = len(header) - 1
        if d < 1 or header[0] != "label" or header[1:] != [f"f{j}" for j in range(d)]:
            raise DataError(f"{path}:1: header must be label,f0,...,f{{d-1}}")
        labels, rows = [], []
        for row in reader:
            line = reader.line_num
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != d + 1:
                raise DataError(f"{path}:{line}: expected {d + 1} fields, found {len(row)}")
            try:
                values = [float(v) for v in row[1:]]
            except ValueError:
                raise DataError(f"{path}:{line}: non-numeric feature value") from None
            if not all(math.isfinite(v) for v in values):
                raise DataError(f"{path}:{line}: non-finite feature value")
            labels.append(row[0])
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    if len(set(labels)) < 2:
        raise DataError(f"{path}: at least 2 classes are required, found {len(set(labels))}")
    return from_string_labels(np.array(rows, dtype=np.float64), labels)


def csv_text(ds: EmbeddedDataset) -> str:
    """CSV rendering of ``ds``; coordinates use ``repr`` so reloading is lossless."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label"] + [f"f{j}" for j in range(ds.d)])
    for lab, row in zip(ds.labels, ds.points):
        writer.writerow([ds.class_names[lab]] + [repr(float(v)) for v in row])
    return buf.getvalue()


def save_csv(ds: EmbeddedDataset, path) -> None:
    Path(path).write_text(csv_text(ds), encoding="utf-8")


# --------------------------------------------------------------------------- #
# CSGE binary
# --------------------------------------------------------------------------- #

def to_binary(ds: EmbeddedDataset) -> bytes:
    """Serialize to the CSGE layout. Coordinates are narrowed to float32."""
    parts = [
        _HEADER.pack(BINARY_MAGIC, BINARY_VERSION, ds.N, ds.d, ds.K),
        ds.labels.astype("<u4").tobytes(),
        ds.points.astype("<f4").tobytes(order="C"),
    ]
    for name in ds.class_names:
        raw = name.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
    return b"".join(parts)


def from_binary(data: bytes) -> EmbeddedDataset:
    if len(data) < _HEADER.size:
        raise DataError("truncated header")
    magic, version, N, d, K = _HEADER.unpack_from(data, 0)
    if magic != BINARY_MAGIC:
        raise DataError(f"bad magic {magic!r}, expected {BINARY_MAGIC!r}")
    if version != BINARY_VERSION:
        raise DataError(f"unsupported version {version}, expected {BINARY_VERSION}")
    off = _HEADER.size
    need = off + 4 * N + 4 * N * d
    if len(data) < need:
        raise DataError(f"truncated payload: header declares N={N}, d={d} "
                        f"({need} bytes) but file has {len(data)} bytes")
    labels = np.frombuffer(data, dtype="<u4", count=N, offset=off).astype(np.int64)
    off += 4 * N
    points = np.frombuffer(data, dtype="<f4", count=N * d, offset=off).reshape(N, d)
    off += 4 * N * d
    names = []
    for _ in range(K):
        if len(data) < off + 4:
            raise DataError("truncated payload in class names")
        (n,) = struct.unpack_from("<I", data, off)
        off += 4
        if len(data) < off + n:
            raise DataError("truncated payload in class names")
        try:
            names.append(data[off:off + n].decode("utf-8"))
        except UnicodeDecodeError:
            raise DataError("class name is not valid UTF-8") from None
        off += n
    if off != len(data):
        raise DataError(f"{len(data) - off} trailing bytes after class names")
    if N and labels.max() >= K:
        raise DataError(f"label {int(labels.max())} >= K={K}")
    return EmbeddedDataset(points.astype(np.float64), labels, names)


def load_binary(path) -> EmbeddedDataset:
    """Read a CSGE binary file. See the module docstring for the layout."""
    return from_binary(Path(path).read_bytes())


def save_binary(ds: EmbeddedDataset, path) -> None:
    Path(path).write_bytes(to_binary(ds))


def load(path, fmt: str | None = None) -> EmbeddedDataset:
    """Load ``path`` as ``"csv"`` or ``"bin"``; guessed from the magic bytes if omitted."""
    if fmt is None:
        with open(path, "rb") as fh:
            fmt = "bin" if fh.read(4) == BINARY_MAGIC else "csv"
    if fmt == "csv":
        return load_csv(path)
    if fmt == "bin":
        return load_binary(path)
    raise DataError(f"unknown format {fmt!r}")


def save(ds: EmbeddedDataset, path, fmt: str | None = None) -> None:
    if fmt is None:
        fmt = "bin" if str(path).endswith((".bin", ".csge")) else "csv"
    if fmt == "csv":
        save_csv(ds, path)
    elif fmt == "bin":
        save_binary(ds, path)
    else:
        raise DataError(f"unknown format {fmt!r}")


# --------------------------------------------------------------------------- #
# Sampling
# --------------------------------------------------------------------------- #

def class_rng(seed: int, name: str) -> np.random.Generator:
    """Independent generator for one class.

    The substream is keyed by the class *name*, so a dataset whose classes
    are renumbered draws exactly the same members for each class.
    """
    key = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed) & _U64, key]))


def derive_seed(seed: int, *path: int) -> int:
    """Deterministic 64-bit child seed of ``seed`` along ``path``."""
    ss = np.random.SeedSequence([int(seed) & _U64, *path])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def stratified_sample(ds: EmbeddedDataset, M: int, seed: int) -> list[np.ndarray]:
    """Draw ``min(M, |C_c|)`` distinct rows from every class, uniformly.

    Returns one sorted index array per class.
    """
    if M < 1:
        raise DataError(f"M must be >= 1, got {M}")
    out = []
    for c in range(ds.K):
        members = ds.members(c)
        if M >= len(members):
            out.append(members.copy())
            continue
        rng = class_rng(seed, ds.class_names[c])
        pick = rng.choice(len(members), size=M, replace=False)
        out.append(np.sort(members[pick]))
    return out


def subsample_ratio(ds: EmbeddedDataset, ratio: float, seed: int) -> EmbeddedDataset:
    """Keep ``ceil(ratio * |C_c|)`` uniformly chosen members of every class.

    Surviving rows keep their original relative order.
    """
    if not (0.0 < ratio <= 1.0):
        raise DataError(f"ratio must lie in (0, 1], got {ratio}")
    keep = []
    for c in range(ds.K):
        members = ds.members(c)
        # round() guards against 0.1 * 30 == 3.0000000000000004
        n = max(1, math.ceil(round(ratio * len(members), 9)))
        if n >= len(members):
            keep.append(members)
            continue
        rng = class_rng(seed, ds.class_names[c])
        keep.append(members[rng.choice(len(members), size=n, replace=False)])
    return ds.take(np.sort(np.concatenate(keep)))


# --------------------------------------------------------------------------- #
# Synthetic data
# --------------------------------------------------------------------------- #

def blob_anchors(K: int, d: int) -> np.ndarray:
    """K deterministic, evenly spread anchors.

    For ``d >= 2`` the anchors are unit vectors at angles ``2 pi c / K`` in the
    plane of the first two axes. For ``d == 1`` they sit at ``0, 1, ..., K-1``.
    """
    if d == 1:
        return np.arange(K, dtype=np.float64)[:, None]
    angle = 2.0 * np.pi * np.arange(K) / K
    anchors = np.zeros((K, d))
    anchors[:, 0] = np.cos(angle)
    anchors[:, 1] = np.sin(angle)
    return anchors


def generate_blobs(K: int, per_class: int, d: int, separation: float, sigma: float = 1.0,
                   seed: int = 0) -> EmbeddedDataset:
    """Isotropic Gaussian classes centered at ``separation * sigma * anchor``.

    See :func:`blob_anchors` for the anchor layout; ``separation = 0`` puts
    every class on the same distribution.
    """
    if K < 2 or per_class < 1 or d < 1:
        raise DataError("generate_blobs needs K >= 2, per_class >= 1, d >= 1")
    if not sigma > 0:
        raise DataError(f"sigma must be positive, got {sigma}")
    rng = np.random.default_rng(int(seed) & _U64)
    centers = separation * sigma * blob_anchors(K, d)
    points = rng.normal(0.0, sigma, size=(K, per_class, d)) + centers[:, None, :]
    labels = np.repeat(np.arange(K), per_class)
    width = len(str(K - 1))
    names = [f"c{c:0{width}d}" for c in range(K)]
    return EmbeddedDataset(points.reshape(K * per_class, d), labels, names)


def swap_labels(ds: EmbeddedDataset, classes: Sequence[int], frac: float,
                seed: int) -> EmbeddedDataset:
    """Inject label noise between a subset of classes.

    From every selected class, ``round(frac * size)`` members (chosen
    uniformly) receive a label drawn uniformly from the *other* selected
    classes. Selection is made on the original labels, so a row moves at
    most once. Unselected classes are untouched.
    """
    classes = [int(c) for c in classes]
    if len(classes) < 2 or len(set(classes)) != len(classes):
        raise DataError("swap_labels needs at least 2 distinct classes")
    if any(c < 0 or c >= ds.K for c in classes):
        raise DataError(f"class indices must lie in [0, {ds.K})")
    if not (0.0 <= frac <= 1.0):
        raise DataError(f"frac must lie in [0, 1], got {frac}")
    rng = np.random.default_rng(int(seed) & _U64)
    labels = ds.labels.copy()
    for c in classes:
        members = ds.members(c)
        n = int(round(frac * len(members)))
        if n == 0:
            continue
        moved = members[rng.choice(len(members), size=n, replace=False)]
        others = np.array([o for o in classes if o != c])
        labels[np.sort(moved)] = others[rng.integers(0, len(others), size=n)]
    # a class can only empty out if every member left and nobody arrived
    counts = np.bincount(labels, minlength=ds.K)
    if np.any(counts == 0):
        raise DataError("label swap emptied a class; lower frac")
    return EmbeddedDataset(ds.points, labels, ds.class_names)
