"""Planar convex hulls, hull areas and convex-layer (onion) decomposition.

Points are handled as ``(n, 2)`` float arrays. Anything array-like with that
shape is accepted; coordinates must be finite.

The hull is built with Graham's scan: pick the rightmost lowest point as the
pivot, sort the rest counter-clockwise around it, keep only the farthest point
on each ray through the pivot, then run the stack scan that keeps a vertex only
while the boundary turns strictly left. Points lying on a hull edge are
therefore never reported as vertices.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from onionpeel.errors import DegenerateInputError, InvalidInputError

__all__ = [
    "Orientation",
    "Hull",
    "PeelDecomposition",
    "as_points",
    "orientation",
    "orientation_tolerance",
    "convex_hull",
    "hull_area",
    "onion_peel",
]

# relative factor for the collinear band: eps = REL_TOL * scale**2
REL_TOL = 1e-12

# below this many points the interior prefilter costs more than it saves
_PREFILTER_MIN = 64

# points per block in the vectorised prefilter
_BLOCK = 8192


class Orientation(enum.IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


@dataclass(frozen=True)
class Hull:
    """A strictly convex ring of point indices.

    ``vertex_ids`` run counter-clockwise from the pivot. When the source had
    exact duplicates of a vertex, the lowest index is the vertex and the other
    copies are listed in ``duplicate_ids``.
    """

    vertex_ids: tuple[int, ...]
    area: float
    duplicate_ids: tuple[int, ...] = ()

    @property
    def member_ids(self) -> tuple[int, ...]:
        return self.vertex_ids + self.duplicate_ids

    def __len__(self) -> int:
        return len(self.vertex_ids)


@dataclass(frozen=True)
class PeelDecomposition:
    layers: tuple[Hull, ...]
    residual_ids: tuple[int, ...]

    @property
    def areas(self) -> list[float]:
        return [layer.area for layer in self.layers]

    def depths(self, n: int) -> np.ndarray:
        """Layer index of every point; residual points get ``len(layers)``."""
        out = np.full(n, len(self.layers), dtype=np.int64)
        for depth, layer in enumerate(self.layers):
            out[list(layer.member_ids)] = depth
        return out


def as_points(points) -> np.ndarray:
    """Validate and convert to a float64 ``(n, 2)`` array."""
    try:
        xy = np.asarray(points, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"cannot interpret points as numbers: {exc}") from None
    if xy.ndim == 1 and xy.size == 0:
        xy = xy.reshape(0, 2)
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise InvalidInputError(f"expected an (n, 2) array of points, got shape {xy.shape}")
    # one cheap reduction; a finite sum can still overflow, so confirm element-wise
    if not np.isfinite(xy.sum()) and not np.all(np.isfinite(xy)):
        raise InvalidInputError("points must have finite coordinates")
    return xy


def orientation_tolerance(xy) -> float:
    """Absolute width of the collinear band for a point set."""
    xy = np.asarray(xy, dtype=np.float64)
    if xy.size == 0:
        return 0.0
    scale = max(float(xy.max()), -float(xy.min()))
    return REL_TOL * scale * scale


def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def orientation(p, q, r, tolerance: float | None = None) -> Orientation:
    """Classify the turn p -> q -> r by the sign of (q - p) x (r - p)."""
    pts = as_points([p, q, r])
    eps = orientation_tolerance(pts) if tolerance is None else tolerance
    (px, py), (qx, qy), (rx, ry) = pts.tolist()
    c = _cross(px, py, qx, qy, rx, ry)
    if c > eps:
        return Orientation.COUNTERCLOCKWISE
    if c < -eps:
        return Orientation.CLOCKWISE
    return Orientation.COLLINEAR


def _shoelace(x, y) -> float:
    if len(x) < 3:
        return 0.0
    # relative to the first vertex to keep the cross terms small
    x = np.asarray(x, dtype=np.float64) - x[0]
    y = np.asarray(y, dtype=np.float64) - y[0]
    s = np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))
    return abs(float(s)) / 2.0


def _polygon_interior(x, y, picks, eps) -> np.ndarray:
    """Points strictly left of every edge of the CCW ring through ``picks``."""
    ring = []
    for i in picks:
        if not ring or (x[i], y[i]) != (x[ring[-1]], y[ring[-1]]):
            ring.append(int(i))
    while len(ring) > 1 and (x[ring[0]], y[ring[0]]) == (x[ring[-1]], y[ring[-1]]):
        ring.pop()
    inside = np.zeros(len(x), dtype=bool)
    if len(ring) < 3:
        return inside
    # the rearranged test below rounds differently from the cross product;
    # never let the margin drop under the default band for the ring's scale
    scale = max(max(abs(x[i]), abs(y[i])) for i in ring)
    eps = max(eps, REL_TOL * scale * scale)
    # (b - a) x (p - a) > eps  <=>  nx * px + ny * py > eps + off, per edge
    edges = [
        (y[a] - y[b], x[b] - x[a], eps + (y[a] - y[b]) * x[a] + (x[b] - x[a]) * y[a])
        for a, b in zip(ring, ring[1:] + ring[:1])
    ]
    # blocks keep the temporaries cache resident, so cost stays linear in n
    for lo in range(0, len(x), _BLOCK):
        bx, by = x[lo:lo + _BLOCK], y[lo:lo + _BLOCK]
        out = inside[lo:lo + _BLOCK]
        out[:] = True
        for nx, ny, off in edges:
            out &= nx * bx + ny * by > off
    return inside


def _interior_mask(x, y, eps) -> np.ndarray:
    """Points strictly inside the polygon spanned by the 8 directional extremes.

    Such points cannot be hull vertices (Akl-Toussaint heuristic).
    """
    # maximisers of -y, x-y, x, x+y, y, y-x, -x, -x-y: increasing direction
    # angle starting from "down"; ties keep the lowest index
    best = np.full(8, -np.inf)
    picks = np.zeros(8, dtype=np.int64)
    for lo in range(0, len(x), _BLOCK):
        bx, by = x[lo:lo + _BLOCK], y[lo:lo + _BLOCK]
        bs, bd = bx + by, bx - by
        for j, (v, sign) in enumerate(
            ((by, -1), (bd, 1), (bx, 1), (bs, 1), (by, 1), (bd, -1), (bx, -1), (bs, -1))
        ):
            i = int(np.argmax(v) if sign > 0 else np.argmin(v))
            if sign * v[i] > best[j]:
                best[j], picks[j] = sign * v[i], lo + i
    return _polygon_interior(x, y, picks.tolist(), eps)


def _fine_interior_mask(x, y, eps, directions: int = 32) -> np.ndarray:
    """Same idea with more directions; worth it only on the octagon survivors."""
    theta = np.linspace(-np.pi / 2, 1.5 * np.pi, directions, endpoint=False)
    picks = [np.argmax(c * x + s * y) for c, s in zip(np.cos(theta), np.sin(theta))]
    return _polygon_interior(x, y, picks, eps)


def _candidates(x, y, eps) -> np.ndarray:
    """Indices that may still be hull vertices."""
    cand = np.arange(len(x))
    if len(x) < _PREFILTER_MIN:
        return cand
    cand = cand[~_interior_mask(x, y, eps)]
    if len(cand) >= 4 * _PREFILTER_MIN:
        cand = cand[~_fine_interior_mask(x[cand], y[cand], eps)]
    return cand


def _graham(x: np.ndarray, y: np.ndarray, eps: float, prefilter: bool = True) -> list[int]:
    """Hull of pairwise-distinct points; returns local indices CCW from the pivot."""
    n = len(x)
    idx = np.arange(n)
    if prefilter:
        idx = _candidates(x, y, eps)
        x, y, n = x[idx], y[idx], len(idx)
    if n < 3:
        raise DegenerateInputError("need at least 3 distinct points for a hull")

    # rightmost of the lowest points
    piv = int(np.lexsort((-x, y))[0])
    rest = np.delete(np.arange(n), piv)
    dx = x[rest] - x[piv]
    dy = y[rest] - y[piv]
    # every other point has dy > 0, or dy == 0 and dx < 0, so this is a
    # strictly increasing function of the polar angle in [0, pi]
    pseudo = -dx / (np.abs(dx) + dy)
    d2 = dx * dx + dy * dy
    order = np.lexsort((d2, pseudo))
    dx, dy, d2, rest = dx[order], dy[order], d2[order], rest[order]

    # one point per ray through the pivot, the farthest; membership is tested
    # against the farthest point seen so far on the ray, whose direction is the
    # most reliable, so a point hugging the pivot cannot bridge two rays
    px, py, ids = [0.0], [0.0], [piv]
    far2 = -1.0
    for ax, ay, a2, j in zip(dx.tolist(), dy.tolist(), d2.tolist(), rest.tolist()):
        fx, fy = px[-1], py[-1]
        if far2 >= 0 and abs(fx * ay - fy * ax) <= eps and fx * ax + fy * ay > 0:
            if a2 > far2:
                px[-1], py[-1], ids[-1], far2 = ax, ay, j, a2
            continue
        px.append(ax)
        py.append(ay)
        ids.append(j)
        far2 = a2
    if len(px) < 3:
        raise DegenerateInputError("all points are collinear")

    stack = [0, 1]
    for i in range(2, len(px)):
        xi, yi = px[i], py[i]
        push = True
        while len(stack) >= 2:
            a, b = stack[-2], stack[-1]
            ax, ay = px[a], py[a]
            ux, uy = px[b] - ax, py[b] - ay
            c = ux * (yi - ay) - uy * (xi - ax)
            if c > eps:
                break
            if c >= -eps and 0 <= ux * (xi - ax) + uy * (yi - ay) < ux * ux + uy * uy:
                # collinear but short of b: i is the redundant one
                push = False
                break
            stack.pop()
        if push:
            stack.append(i)

    # closing turns back into the pivot; only near-degenerate input trips these
    while len(stack) >= 3 and _cross(
        px[stack[-2]], py[stack[-2]], px[stack[-1]], py[stack[-1]], 0.0, 0.0
    ) <= eps:
        stack.pop()
    if len(stack) >= 3 and _cross(
        px[stack[-1]], py[stack[-1]], 0.0, 0.0, px[stack[1]], py[stack[1]]
    ) <= eps:
        stack = stack[1:]
    if len(stack) < 3:
        raise DegenerateInputError("all points are collinear")
    return [int(idx[ids[s]]) for s in stack]


def _dedupe(xy: np.ndarray):
    """Unique rows, the lowest source index of each, and the row -> unique map."""
    uniq, first, inverse = np.unique(xy, axis=0, return_index=True, return_inverse=True)
    return uniq, first, inverse.reshape(-1)


def _duplicates_of(vertex_ids, inverse, first) -> tuple[int, ...]:
    if len(inverse) == len(first):
        return ()
    groups = np.isin(inverse, inverse[list(vertex_ids)])
    groups[list(vertex_ids)] = False
    return tuple(int(i) for i in np.flatnonzero(groups))


def convex_hull(points, tolerance: float | None = None) -> Hull:
    """Convex hull of a planar point set.

    Raises:
        DegenerateInputError: fewer than 3 distinct points, or all collinear.
    """
    xy = as_points(points)
    if len(xy) < 3:
        raise DegenerateInputError(f"need at least 3 points, got {len(xy)}")
    eps = orientation_tolerance(xy) if tolerance is None else tolerance
    # copies of a vertex sit on the boundary, so they all survive the prefilter
    cand = _candidates(xy[:, 0], xy[:, 1], eps)
    uniq, first, inverse = _dedupe(xy[cand])
    local = _graham(uniq[:, 0], uniq[:, 1], eps, prefilter=False)
    vertex_ids = tuple(int(cand[first[i]]) for i in local)
    dups = ()
    if len(uniq) < len(cand):
        dups = tuple(
            int(cand[i]) for i in _duplicates_of([int(first[i]) for i in local], inverse, first)
        )
    ring = xy[list(vertex_ids)]
    return Hull(vertex_ids, _shoelace(ring[:, 0], ring[:, 1]), dups)


def hull_area(hull: Hull, points) -> float:
    """Shoelace area of the hull polygon."""
    xy = as_points(points)
    ids = np.asarray(hull.vertex_ids, dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= len(xy)):
        raise InvalidInputError("hull vertex index out of range for the given points")
    ring = xy[ids]
    return _shoelace(ring[:, 0], ring[:, 1])


def onion_peel(points, tolerance: float | None = None) -> PeelDecomposition:
    """Peel convex layers until fewer than 3 points, or only collinear ones, remain."""
    xy = as_points(points)
    if len(xy) < 3:
        raise DegenerateInputError(f"need at least 3 points, got {len(xy)}")
    eps = orientation_tolerance(xy) if tolerance is None else tolerance
    uniq, first, inverse = _dedupe(xy)
    has_dups = len(uniq) < len(xy)

    alive = np.arange(len(uniq))
    layers = []
    while len(alive) >= 3:
        try:
            local = _graham(uniq[alive, 0], uniq[alive, 1], eps)
        except DegenerateInputError:
            break
        ring_u = alive[local]
        vertex_ids = tuple(int(first[u]) for u in ring_u)
        dups = _duplicates_of(vertex_ids, inverse, first) if has_dups else ()
        ring = uniq[ring_u]
        layers.append(Hull(vertex_ids, _shoelace(ring[:, 0], ring[:, 1]), dups))
        alive = np.delete(alive, local)

    residual = np.flatnonzero(np.isin(inverse, alive))
    return PeelDecomposition(tuple(layers), tuple(int(i) for i in residual))
