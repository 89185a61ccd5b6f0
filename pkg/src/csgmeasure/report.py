"""ComplexityReport and its JSON / CSV serializations."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import DataError

FORMAT_VERSION = 1

# Recorded in every report so readers know how S was normalized.
NORMALIZATION = "per-sample likelihoods normalized to sum 1 (uniform class prior)"


@dataclass(frozen=True, eq=False)
class ComplexityReport:
    csg: float
    eigenvalues: np.ndarray
    gaps: np.ndarray
    cummax_profile: np.ndarray
    S: np.ndarray
    W: np.ndarray
    class_names: tuple
    M: int
    k: int
    seed: int
    epsilon_radius: float
    effective_M: np.ndarray
    evaluation_count: int
    wall_time_seconds: float
    tool_version: str
    format_version: int = FORMAT_VERSION

    @property
    def K(self) -> int:
        return len(self.class_names)

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "tool_version": self.tool_version,
            "csg": float(self.csg),
            "spectrum": {
                "eigenvalues": _floats(self.eigenvalues),
                "gaps": _floats(self.gaps),
                "cummax": _floats(self.cummax_profile),
            },
            "S": [_floats(row) for row in self.S],
            "W": [_floats(row) for row in self.W],
            "class_names": list(self.class_names),
            "params": {
                "M": int(self.M),
                "k": int(self.k),
                "seed": int(self.seed),
                "epsilon_radius": float(self.epsilon_radius),
                "effective_M": [int(m) for m in self.effective_M],
                "normalization": NORMALIZATION,
            },
            "evaluation_count": int(self.evaluation_count),
            "wall_time_seconds": float(self.wall_time_seconds),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ComplexityReport":
        try:
            version = int(data["format_version"])
        except (KeyError, TypeError, ValueError):
            raise DataError("report lacks a valid format_version") from None
        if version > FORMAT_VERSION:
            raise DataError(f"report format_version {version} is newer than supported "
                            f"({FORMAT_VERSION}); upgrade csgmeasure")
        try:
            params = data["params"]
            spectrum = data["spectrum"]
            return cls(
                csg=float(data["csg"]),
                eigenvalues=np.array(spectrum["eigenvalues"], dtype=np.float64),
                gaps=np.array(spectrum["gaps"], dtype=np.float64),
                cummax_profile=np.array(spectrum["cummax"], dtype=np.float64),
                S=np.array(data["S"], dtype=np.float64),
                W=np.array(data["W"], dtype=np.float64),
                class_names=tuple(data["class_names"]),
                M=int(params["M"]),
                k=int(params["k"]),
                seed=int(params["seed"]),
                epsilon_radius=float(params["epsilon_radius"]),
                effective_M=np.array(params["effective_M"], dtype=np.int64),
                evaluation_count=int(data["evaluation_count"]),
                wall_time_seconds=float(data["wall_time_seconds"]),
                tool_version=str(data["tool_version"]),
                format_version=version,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed report: {exc}") from None

    def check_consistency(self, tol: float = 1e-12) -> None:
        """Raise DataError unless csg and evaluation_count match their inputs."""
        from .spectral import csg as _csg

        value, _ = _csg(self.gaps)
        if abs(value - self.csg) > tol:
            raise DataError(f"csg {self.csg} disagrees with its gaps ({value})")
        expected = self.K * int(np.sum(self.effective_M))
        if self.evaluation_count != expected:
            raise DataError(f"evaluation_count {self.evaluation_count} != K * sum(M) = {expected}")


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values, dtype=np.float64).ravel()]


def jsonable(obj):
    """Recursively turn numpy values into JSON-safe Python, infinities into strings."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def dumps(data) -> str:
    return json.dumps(jsonable(data), indent=2, sort_keys=True) + "\n"


def report_to_json(report: ComplexityReport) -> str:
    return dumps(report.to_dict())


def report_from_json(text: str) -> ComplexityReport:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DataError("report JSON must be an object")
    return ComplexityReport.from_dict(data)


def load_report(path) -> ComplexityReport:
    return report_from_json(Path(path).read_text(encoding="utf-8"))


def spectrum_csv(eigenvalues) -> str:
    lines = ["index,eigenvalue"]
    lines += [f"{i},{float(v)!r}" for i, v in enumerate(eigenvalues)]
    return "\n".join(lines) + "\n"
