"""Distance metrics, covariance estimation and per-axis standardization.

Each metric comes in two forms: a scalar function on a pair of points, and a
vectorized ``pairwise_*`` form used by the detector that measures a handful of
query points against a whole point array.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from onionpeel.errors import (
    InsufficientDataError,
    InvalidInputError,
    InvalidParameterError,
)
from onionpeel.geometry import as_points

__all__ = [
    "MetricKind",
    "Variances2",
    "Covariance2",
    "euclidean",
    "standardized_euclidean",
    "mahalanobis",
    "estimate_covariance",
    "sample_variances",
    "standardize",
    "pairwise_distances",
]

# det <= PD_RATIO * (trace / 2)**2 counts as singular
PD_RATIO = 1e-12
RIDGE_FACTOR = 1e-8
RIDGE_ESCALATIONS = 3


class MetricKind(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    STANDARDIZED_EUCLIDEAN = "std-euclidean"
    MAHALANOBIS = "mahalanobis"


@dataclass(frozen=True)
class Variances2:
    var_x: float
    var_y: float

    def __post_init__(self):
        for name in ("var_x", "var_y"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameterError(f"{name} must be a positive finite number, got {v}")


@dataclass(frozen=True)
class Covariance2:
    """Symmetric 2x2 covariance with its inverse and the sample mean.

    ``ridge`` is the amount added to the diagonal to make the matrix
    positive definite (0.0 when none was needed).
    """

    sxx: float
    sxy: float
    syy: float
    mean: tuple[float, float] = (0.0, 0.0)
    ridge: float = 0.0

    def __post_init__(self):
        if not (self.sxx > 0 and self.syy > 0 and self.det > 0):
            raise InvalidParameterError(
                f"covariance is not positive definite (sxx={self.sxx}, sxy={self.sxy}, syy={self.syy})"
            )

    @property
    def det(self) -> float:
        return self.sxx * self.syy - self.sxy * self.sxy

    @property
    def inverse(self) -> tuple[float, float, float, float]:
        d = self.det
        return (self.syy / d, -self.sxy / d, -self.sxy / d, self.sxx / d)

    def matrix(self) -> np.ndarray:
        return np.array([[self.sxx, self.sxy], [self.sxy, self.syy]])

    def inverse_matrix(self) -> np.ndarray:
        return np.array(self.inverse).reshape(2, 2)

    @classmethod
    def identity(cls) -> Covariance2:
        return cls(1.0, 0.0, 1.0)

    @classmethod
    def diagonal(cls, var_x: float, var_y: float, mean=(0.0, 0.0)) -> Covariance2:
        return cls(float(var_x), 0.0, float(var_y), (float(mean[0]), float(mean[1])))


def _pair(x, y):
    xy = as_points([x, y])
    return xy[0], xy[1]


def euclidean(x, y) -> float:
    a, b = _pair(x, y)
    return math.hypot(a[0] - b[0], a[1] - b[1])


def standardized_euclidean(x, y, v: Variances2) -> float:
    if not isinstance(v, Variances2):
        v = Variances2(*v)
    a, b = _pair(x, y)
    dx, dy = a[0] - b[0], a[1] - b[1]
    return math.sqrt(dx * dx / v.var_x + dy * dy / v.var_y)


def _quad(cov: Covariance2, dx, dy):
    a, b, _, c = cov.inverse
    q = a * dx * dx + 2.0 * b * dx * dy + c * dy * dy
    # rounding can push a true zero slightly negative
    return np.maximum(q, 0.0)


def mahalanobis(x, y, cov: Covariance2) -> float:
    if not isinstance(cov, Covariance2):
        raise InvalidParameterError("mahalanobis needs a Covariance2")
    a, b = _pair(x, y)
    return math.sqrt(float(_quad(cov, a[0] - b[0], a[1] - b[1])))


def _sample_moments(xy: np.ndarray):
    mean = xy.mean(axis=0)
    c = xy - mean
    denom = len(xy) - 1
    sxx = float(np.dot(c[:, 0], c[:, 0]) / denom)
    syy = float(np.dot(c[:, 1], c[:, 1]) / denom)
    sxy = float(np.dot(c[:, 0], c[:, 1]) / denom)
    return mean, sxx, sxy, syy


def estimate_covariance(points) -> Covariance2:
    """Sample mean and unbiased (1/(n-1)) covariance.

    A near-singular estimate gets a diagonal ridge of 1e-8 * trace / 2,
    multiplied by 10 up to three more times. If that still does not give a
    positive definite matrix, InvalidParameterError is raised.
    """
    xy = as_points(points)
    if len(xy) < 3:
        raise InsufficientDataError(f"need at least 3 points to estimate covariance, got {len(xy)}")
    mean, sxx, sxy, syy = _sample_moments(xy)
    mean = (float(mean[0]), float(mean[1]))
    half_trace = (sxx + syy) / 2.0
    det = sxx * syy - sxy * sxy
    if sxx > 0 and syy > 0 and det > PD_RATIO * half_trace * half_trace:
        return Covariance2(sxx, sxy, syy, mean)

    ridge = RIDGE_FACTOR * half_trace
    for _ in range(RIDGE_ESCALATIONS + 1):
        a, c = sxx + ridge, syy + ridge
        det = a * c - sxy * sxy
        if ridge > 0 and det > PD_RATIO * ((a + c) / 2.0) ** 2:
            return Covariance2(a, sxy, c, mean, ridge)
        ridge *= 10.0
    raise InvalidParameterError(
        "covariance is singular and ridge regularization failed "
        f"(sxx={sxx}, sxy={sxy}, syy={syy})"
    )


def sample_variances(points) -> Variances2:
    xy = as_points(points)
    if len(xy) < 2:
        raise InsufficientDataError("need at least 2 points to estimate variances")
    var = xy.var(axis=0, ddof=1)
    if not np.all(var > 0):
        raise InvalidInputError(f"zero variance along an axis: {var.tolist()}")
    return Variances2(float(var[0]), float(var[1]))


def standardize(points) -> np.ndarray:
    """Divide each axis by its sample standard deviation. No recentering."""
    xy = as_points(points)
    v = sample_variances(xy)
    return xy / np.sqrt([v.var_x, v.var_y])


def pairwise_distances(queries, points, metric: MetricKind, context=None) -> np.ndarray:
    """Distances from each query row to each point row, shape (q, n).

    ``context`` is a Variances2 for the standardized metric and a Covariance2
    for Mahalanobis; it is ignored for Euclidean.
    """
    metric = MetricKind(metric)
    q = np.asarray(queries, dtype=np.float64)
    p = np.asarray(points, dtype=np.float64)
    dx = q[:, 0:1] - p[None, :, 0]
    dy = q[:, 1:2] - p[None, :, 1]
    if metric is MetricKind.EUCLIDEAN:
        return np.sqrt(dx * dx + dy * dy)
    if metric is MetricKind.STANDARDIZED_EUCLIDEAN:
        if not isinstance(context, Variances2):
            raise InvalidParameterError("standardized euclidean needs Variances2")
        return np.sqrt(dx * dx / context.var_x + dy * dy / context.var_y)
    if not isinstance(context, Covariance2):
        raise InvalidParameterError("mahalanobis needs a Covariance2")
    return np.sqrt(_quad(context, dx, dy))
