"""Seeded synthetic 2-D Gaussian datasets and their CSV / JSON files.

Inliers come from an axis-aligned Gaussian. Planted outliers, when asked for,
sit on or beyond a given Mahalanobis radius of the generating distribution, in
a uniformly random direction, so they are equally far out whichever axis they
lean towards.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from onionpeel.errors import (
    EmptyDatasetError,
    InvalidInputError,
    InvalidParameterError,
    ParseError,
)
from onionpeel.geometry import as_points
from onionpeel.metrics import Variances2

__all__ = [
    "GenSpec",
    "DataSet",
    "DEFAULT_SPEC",
    "generate",
    "load_points",
    "save_points",
    "dumps_points",
    "loads_points",
]

# planted radii are drawn uniformly from [r, r * (1 + RADIUS_SPREAD)]
RADIUS_SPREAD = 0.25

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class GenSpec:
    n: int = 1500
    mean: tuple[float, float] = (0.0, 0.0)
    variances: Variances2 = field(default_factory=lambda: Variances2(1.0, 100.0))
    contamination: float = 0.0
    outlier_radius_multiplier: float = 4.0
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.variances, (tuple, list)):
            object.__setattr__(self, "variances", Variances2(*map(float, self.variances)))
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 3:
            raise InvalidParameterError(f"n must be an integer >= 3, got {self.n!r}")
        if len(self.mean) != 2 or not all(math.isfinite(m) for m in self.mean):
            raise InvalidParameterError(f"mean must be two finite numbers, got {self.mean!r}")
        if not (0.0 <= self.contamination < 1.0):
            raise InvalidParameterError(f"contamination must lie in [0, 1), got {self.contamination}")
        r = self.outlier_radius_multiplier
        if not (math.isfinite(r) and r > 0):
            raise InvalidParameterError(f"outlier_radius_multiplier must be positive, got {r}")
        if not (0 <= int(self.seed) < 2**64):
            raise InvalidParameterError(f"seed must fit in an unsigned 64-bit integer, got {self.seed}")

    @property
    def n_inliers(self) -> int:
        # the small nudge keeps e.g. 0.99 * 1500 from flooring to 1484
        return int(math.floor((1.0 - self.contamination) * self.n + 1e-9))

    @property
    def n_outliers(self) -> int:
        return self.n - self.n_inliers

    def with_seed(self, seed: int) -> GenSpec:
        return GenSpec(self.n, self.mean, self.variances, self.contamination,
                       self.outlier_radius_multiplier, seed)


DEFAULT_SPEC = GenSpec(n=1500, variances=Variances2(1.0, 100.0), contamination=0.01,
                     outlier_radius_multiplier=4.0, seed=42)


@dataclass(frozen=True, eq=False)
class DataSet:
    points: np.ndarray
    truth_outlier_ids: frozenset[int] = frozenset()
    seed: int | None = None

    def __post_init__(self):
        pts = as_points(self.points)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        truth = frozenset(int(i) for i in self.truth_outlier_ids)
        if any(i < 0 or i >= len(pts) for i in truth):
            raise InvalidInputError("truth outlier ids must index into points")
        object.__setattr__(self, "truth_outlier_ids", truth)

    @property
    def n(self) -> int:
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, DataSet):
            return NotImplemented
        return (
            np.array_equal(self.points, other.points)
            and self.truth_outlier_ids == other.truth_outlier_ids
            and self.seed == other.seed
        )

    __hash__ = None


def generate(spec: GenSpec) -> DataSet:
    """Draw a dataset; identical specs give bit-identical points."""
    rng = np.random.default_rng(int(spec.seed))
    sd = np.sqrt([spec.variances.var_x, spec.variances.var_y])
    mean = np.asarray(spec.mean, dtype=np.float64)

    inliers = mean + rng.standard_normal((spec.n_inliers, 2)) * sd

    m = spec.n_outliers
    theta = rng.uniform(0.0, 2.0 * np.pi, m)
    r = spec.outlier_radius_multiplier * (1.0 + RADIUS_SPREAD * rng.random(m))
    planted = mean + (r[:, None] * np.column_stack([np.cos(theta), np.sin(theta)])) * sd

    # interleave the planted points at random positions
    pts = np.empty((spec.n, 2))
    slots = np.sort(rng.choice(spec.n, size=m, replace=False)) if m else np.empty(0, dtype=np.int64)
    mask = np.zeros(spec.n, dtype=bool)
    mask[slots] = True
    pts[mask] = planted
    pts[~mask] = inliers
    return DataSet(pts, frozenset(int(i) for i in slots), int(spec.seed))


# ---------------------------------------------------------------- file I/O


def _check_format(fmt: str) -> str:
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise InvalidParameterError(f"unknown format {fmt!r}; choose one of {FORMATS}")
    return fmt


def dumps_points(ds: DataSet, fmt: str = "csv") -> str:
    fmt = _check_format(fmt)
    if fmt == "csv":
        lines = ["x,y"]
        lines += [f"{x!r},{y!r}" for x, y in ds.points.tolist()]
        return "\n".join(lines) + "\n"
    doc = {
        "points": ds.points.tolist(),
        "truth_outliers": sorted(ds.truth_outlier_ids),
        "seed": ds.seed,
    }
    return json.dumps(doc) + "\n"


def _parse_float(text: str, line: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"not a number: {text.strip()!r}", line) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value {text.strip()!r}", line)
    return v


def _loads_csv(text: str) -> DataSet:
    rows = []
    reader = csv.reader(io.StringIO(text))
    saw_header = False
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if not saw_header:
            saw_header = True
            if [c.strip().lower() for c in row] == ["x", "y"]:
                continue
        if len(row) != 2:
            raise ParseError(f"expected 2 columns, got {len(row)}", line)
        rows.append((_parse_float(row[0], line), _parse_float(row[1], line)))
    if not rows:
        raise EmptyDatasetError("no points in input")
    return DataSet(np.array(rows, dtype=np.float64))


def _loads_json(text: str) -> DataSet:
    if not text.strip():
        raise EmptyDatasetError("no points in input")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "points" not in doc:
        raise ParseError('expected an object with a "points" array')
    raw = doc["points"]
    if not isinstance(raw, list) or not raw:
        raise EmptyDatasetError("no points in input")
    for i, p in enumerate(raw):
        ok = (
            isinstance(p, list) and len(p) == 2
            and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)
        )
        if not ok:
            raise ParseError(f"points[{i}] is not an [x, y] pair of numbers")
        if not all(math.isfinite(c) for c in p):
            raise ParseError(f"points[{i}] has a non-finite coordinate")
    truth = doc.get("truth_outliers") or []
    seed = doc.get("seed")
    return DataSet(np.array(raw, dtype=np.float64), frozenset(truth), seed)


def loads_points(text: str, fmt: str = "csv") -> DataSet:
    fmt = _check_format(fmt)
    return _loads_csv(text) if fmt == "csv" else _loads_json(text)


def _guess_format(path: Path, fmt: str | None) -> str:
    if fmt:
        return _check_format(fmt)
    return "json" if path.suffix.lower() == ".json" else "csv"


def save_points(ds: DataSet, path, fmt: str | None = None) -> None:
    path = Path(path)
    path.write_text(dumps_points(ds, _guess_format(path, fmt)), encoding="utf-8")


def load_points(path, fmt: str | None = None) -> DataSet:
    path = Path(path)
    return loads_points(path.read_text(encoding="utf-8"), _guess_format(path, fmt))
