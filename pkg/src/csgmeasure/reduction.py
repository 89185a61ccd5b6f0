"""CSG as a function of the fraction of each class that is kept."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import EmbeddedDataset, derive_seed, subsample_ratio
from .exceptions import DataError
from .similarity import SimilarityParams
from .spectral import csg_pipeline


@dataclass(frozen=True)
class SweepPoint:
    ratio: float
    counts_per_class: np.ndarray
    csg_values: np.ndarray
    wall_time_seconds: float

    @property
    def csg_mean(self) -> float:
        return float(np.mean(self.csg_values))

    @property
    def csg_std(self) -> float:
        """Sample standard deviation over repeats (0 for a single repeat)."""
        if len(self.csg_values) < 2:
            return 0.0
        return float(np.std(self.csg_values, ddof=1))

    @property
    def count_per_class(self) -> int:
        """Smallest per-class count; equals every class's count when balanced."""
        return int(self.counts_per_class.min())


@dataclass(frozen=True)
class SweepResult:
    points: list
    seed: int
    params: SimilarityParams
    repeats: int = 1
    reports: list = field(default_factory=list, repr=False)

    def to_csv(self) -> str:
        lines = ["ratio,count_per_class,csg_mean,csg_std"]
        for p in self.points:
            lines.append(f"{p.ratio!r},{p.count_per_class},{p.csg_mean!r},{p.csg_std!r}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "seed": int(self.seed),
            "repeats": int(self.repeats),
            "params": {"M": self.params.M, "k": self.params.density.k,
                       "seed": self.params.seed},
            "points": [
                {
                    "ratio": p.ratio,
                    "count_per_class": p.count_per_class,
                    "counts_per_class": [int(c) for c in p.counts_per_class],
                    "csg_mean": p.csg_mean,
                    "csg_std": p.csg_std,
                    "csg_values": [float(v) for v in p.csg_values],
                    "wall_time_seconds": p.wall_time_seconds,
                }
                for p in self.points
            ],
        }


def parse_ratios(text: str) -> list[float]:
    """Parse ``"1.0,0.8,0.5"``; every value must lie in (0, 1]."""
    try:
        ratios = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise DataError(f"cannot parse ratios {text!r}") from None
    if not ratios:
        raise DataError("no ratios given")
    bad = [r for r in ratios if not (0.0 < r <= 1.0)]
    if bad:
        raise DataError(f"ratios must lie in (0, 1]: {bad}")
    return ratios


def sweep(ds: EmbeddedDataset, ratios, params: SimilarityParams = SimilarityParams(),
          repeats: int = 1, seed: int = 0, threads: int | None = None) -> SweepResult:
    """Run the CSG pipeline on class-stratified subsamples of ``ds``.

    Ratios are processed in decreasing order. For each ratio, ``repeats``
    subsamples are drawn with seeds derived from ``seed``. The first repeat
    keeps ``params.seed`` for the Monte-Carlo stage, so a lone ``1.0`` ratio
    reproduces :func:`csg_pipeline` on ``ds``; later repeats also vary it.
    The embedding itself is never recomputed.
    """
    if repeats < 1:
        raise DataError(f"repeats must be >= 1, got {repeats}")
    ratios = [float(r) for r in ratios]
    for r in ratios:
        if not (0.0 < r <= 1.0):
            raise DataError(f"ratio must lie in (0, 1], got {r}")
    if len(set(ratios)) != len(ratios):
        raise DataError("ratios must be distinct")
    ratios.sort(reverse=True)
    points, reports = [], []
    for i, ratio in enumerate(ratios):
        t0 = time.perf_counter()
        values, counts = [], None
        for rep in range(repeats):
            sub = subsample_ratio(ds, ratio, derive_seed(seed, i, rep))
            mc_seed = params.seed if rep == 0 else derive_seed(params.seed, i, rep, 1)
            report = csg_pipeline(sub, SimilarityParams(params.M, mc_seed, params.density),
                                  threads=threads)
            values.append(report.csg)
            reports.append(report)
            counts = sub.class_sizes()
        expected = [max(1, math.ceil(round(ratio * n, 9))) for n in ds.class_sizes()]
        assert list(counts) == expected
        points.append(SweepPoint(ratio, counts, np.array(values), time.perf_counter() - t0))
    return SweepResult(points, seed, params, repeats, reports)
