"""Top-k outlier search over successive convex hulls.

Each round builds the hull of the points still in play, scores every hull
vertex, reports the best-scoring one and then removes either that point alone
or the whole hull before the next round. Only hull vertices are ever scored,
which is what keeps a round close to linear in the number of survivors.

Two scores are available:

* ``sum``: total distance from the vertex to every other surviving point.
* ``center``: distance from the vertex to the mean of the survivors.

Standardization and the Mahalanobis covariance are computed once, on the full
input, and held fixed for every round.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from onionpeel.errors import DegenerateInputError, InvalidParameterError, PreconditionError
from onionpeel.geometry import Hull, as_points, convex_hull, orientation_tolerance
from onionpeel.metrics import (
    MetricKind,
    estimate_covariance,
    pairwise_distances,
    sample_variances,
    standardize,
)

__all__ = [
    "Scoring",
    "Removal",
    "DetectionConfig",
    "ScoredVertex",
    "OutlierReport",
    "MetricContext",
    "metric_context",
    "score_hull_vertices",
    "select_max",
    "detect",
]

PRECONDITION_MESSAGE = "Size must be greater than outliers"


class Scoring(str, enum.Enum):
    SUM_TO_ALL = "sum"
    DISTANCE_TO_CENTER = "center"


class Removal(str, enum.Enum):
    SINGLE_POINT = "point"
    WHOLE_HULL = "hull"


@dataclass(frozen=True)
class DetectionConfig:
    k: int = 15
    metric: MetricKind = MetricKind.EUCLIDEAN
    scoring: Scoring = Scoring.SUM_TO_ALL
    removal: Removal = Removal.SINGLE_POINT
    standardize_first: bool = False

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)) or self.k < 0:
            raise InvalidParameterError(f"k must be a non-negative integer, got {self.k!r}")
        try:
            object.__setattr__(self, "metric", MetricKind(self.metric))
            object.__setattr__(self, "scoring", Scoring(self.scoring))
            object.__setattr__(self, "removal", Removal(self.removal))
        except ValueError as exc:
            raise InvalidParameterError(str(exc)) from None
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "standardize_first", bool(self.standardize_first))

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "metric": self.metric.value,
            "scoring": self.scoring.value,
            "removal": self.removal.value,
            "standardize_first": self.standardize_first,
        }

    @classmethod
    def from_dict(cls, d: dict) -> DetectionConfig:
        return cls(**d)


@dataclass(frozen=True)
class ScoredVertex:
    point_id: int
    score: float
    iteration: int = 0


@dataclass(frozen=True)
class OutlierReport:
    """Result of :func:`detect`.

    ``outlier_ids[i]`` was chosen in round ``i`` with score ``scores[i]`` from
    a hull of area ``volumes[i]``. With ``k == 0`` there are no ids and a
    single volume, that of the initial hull.
    """

    outlier_ids: tuple[int, ...]
    volumes: tuple[float, ...]
    scores: tuple[float, ...]
    config: DetectionConfig
    early_termination: bool = False

    def to_dict(self) -> dict:
        return {
            "outlier_ids": list(self.outlier_ids),
            "volumes": list(self.volumes),
            "scores": list(self.scores),
            "config": self.config.to_dict(),
            "early_termination": self.early_termination,
        }

    @classmethod
    def from_dict(cls, d: dict) -> OutlierReport:
        return cls(
            tuple(int(i) for i in d["outlier_ids"]),
            tuple(float(v) for v in d["volumes"]),
            tuple(float(s) for s in d["scores"]),
            DetectionConfig.from_dict(d["config"]),
            bool(d["early_termination"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> OutlierReport:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MetricContext:
    """A metric plus whatever it was fitted on (variances or covariance)."""

    metric: MetricKind
    params: object = None

    def distances(self, queries, points) -> np.ndarray:
        return pairwise_distances(queries, points, self.metric, self.params)


def metric_context(points, metric) -> MetricContext:
    """Fit the metric's parameters on ``points`` (the full dataset)."""
    metric = MetricKind(metric)
    if metric is MetricKind.STANDARDIZED_EUCLIDEAN:
        return MetricContext(metric, sample_variances(points))
    if metric is MetricKind.MAHALANOBIS:
        return MetricContext(metric, estimate_covariance(points))
    return MetricContext(metric)


def score_hull_vertices(
    hull: Hull,
    points,
    survivor_ids,
    context: MetricContext,
    scoring=Scoring.SUM_TO_ALL,
    iteration: int = 0,
) -> list[ScoredVertex]:
    """Score each hull vertex against the surviving points.

    ``hull.vertex_ids`` and ``survivor_ids`` both index into ``points``.
    """
    xy = np.asarray(points, dtype=np.float64)
    survivors = xy[np.asarray(survivor_ids, dtype=np.int64)]
    verts = xy[list(hull.vertex_ids)]
    if Scoring(scoring) is Scoring.SUM_TO_ALL:
        # d(v, v) == 0, so summing over all survivors equals summing over the others
        scores = context.distances(verts, survivors).sum(axis=1)
    else:
        center = survivors.mean(axis=0, keepdims=True)
        scores = context.distances(verts, center)[:, 0]
    return [
        ScoredVertex(int(v), float(s), iteration)
        for v, s in zip(hull.vertex_ids, scores)
    ]


def select_max(scored: list[ScoredVertex]) -> ScoredVertex:
    """Highest score; equal scores go to the lowest point id."""
    if not scored:
        raise RuntimeError("select_max called with no scored vertices")
    return min(scored, key=lambda sv: (-sv.score, sv.point_id))


def detect(points, config: DetectionConfig) -> OutlierReport:
    """Report the ``config.k`` most outlying points, most outlying first.

    Raises:
        PreconditionError: ``len(points) <= k``.
        DegenerateInputError: fewer than 3 points.

    When the survivors stop forming a proper hull before ``k`` outliers are
    found, the partial result is returned with ``early_termination`` set.
    """
    xy = as_points(points)
    n = len(xy)
    if n <= config.k:
        raise PreconditionError(f"{PRECONDITION_MESSAGE} (size {n}, k {config.k})")
    if n < 3:
        raise DegenerateInputError(f"need at least 3 points, got {n}")

    work = standardize(xy) if config.standardize_first else xy
    ctx = metric_context(work, config.metric)
    eps = orientation_tolerance(work)

    alive = np.ones(n, dtype=bool)
    ids: list[int] = []
    volumes: list[float] = []
    scores: list[float] = []
    early = False
    for it in range(max(config.k, 1)):
        survivor_ids = np.flatnonzero(alive)
        try:
            local = convex_hull(work[survivor_ids], tolerance=eps)
        except DegenerateInputError:
            early = True
            break
        hull = Hull(
            tuple(int(survivor_ids[i]) for i in local.vertex_ids),
            local.area,
            tuple(int(survivor_ids[i]) for i in local.duplicate_ids),
        )
        volumes.append(hull.area)
        if config.k == 0:
            break
        best = select_max(score_hull_vertices(hull, work, survivor_ids, ctx, config.scoring, it))
        ids.append(best.point_id)
        scores.append(best.score)
        if config.removal is Removal.SINGLE_POINT:
            alive[best.point_id] = False
        else:
            alive[list(hull.member_ids)] = False

    return OutlierReport(tuple(ids), tuple(volumes), tuple(scores), config, early)
