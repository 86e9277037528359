import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from onionpeel.errors import DegenerateInputError, InvalidInputError
from onionpeel.geometry import (
    Hull,
    Orientation,
    convex_hull,
    hull_area,
    onion_peel,
    orientation,
    orientation_tolerance,
)
from oracles import brute_hull_vertices


def concentric_squares():
    pts = []
    for half in (1.0, 2.0, 3.0):
        pts += [(-half, -half), (half, -half), (half, half), (-half, half)]
    return pts


def inside_or_on(hull_xy, p, tol):
    """True when p is inside the CCW ring or within distance tol of its edges' lines."""
    n = len(hull_xy)
    for i in range(n):
        a, b = hull_xy[i], hull_xy[(i + 1) % n]
        c = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        if c < -tol * math.hypot(b[0] - a[0], b[1] - a[1]):
            return False
    return True


# ------------------------------------------------------------- orientation


@pytest.mark.parametrize(
    "p, q, r, expected",
    [
        ((0, 0), (1, 0), (0, 1), Orientation.COUNTERCLOCKWISE),
        ((0, 0), (1, 0), (2, 0), Orientation.COLLINEAR),
        ((0, 0), (0, 1), (1, 0), Orientation.CLOCKWISE),
    ],
)
def test_orientation_examples(p, q, r, expected):
    assert orientation(p, q, r) is expected


@given(st.lists(st.floats(-1e3, 1e3), min_size=6, max_size=6))
def test_orientation_antisymmetric(c):
    p, q, r = (c[0], c[1]), (c[2], c[3]), (c[4], c[5])
    a, b = orientation(p, q, r), orientation(p, r, q)
    if a is not Orientation.COLLINEAR:
        assert b == -a


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_orientation_rejects_non_finite(bad):
    with pytest.raises(InvalidInputError):
        orientation((0, 0), (1, bad), (0, 1))


# ------------------------------------------------------------- convex hull


def test_hull_unit_square_drops_interior_point():
    pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)]
    h = convex_hull(pts)
    assert set(h.vertex_ids) == {0, 1, 2, 3}
    assert h.area == 1.0
    # starts at the rightmost lowest point and runs counter-clockwise
    assert h.vertex_ids == (1, 2, 3, 0)


def test_hull_drops_boundary_collinear_point():
    h = convex_hull([(0, 0), (2, 0), (1, 1), (1, 0)])
    assert set(h.vertex_ids) == {0, 1, 2}
    assert h.area == pytest.approx(1.0)


def test_hull_ties_on_a_ray_keep_the_farthest():
    # (1,1), (2,2), (3,3) share a ray from the pivot (0,0)
    pts = [(0, 0), (1, 1), (2, 2), (3, 3), (4, 0), (0, 4)]
    h = convex_hull(pts)
    assert set(h.vertex_ids) == {0, 3, 4, 5}


def test_hull_errors():
    with pytest.raises(DegenerateInputError):
        convex_hull([(0, 0), (1, 1)])
    with pytest.raises(DegenerateInputError):
        convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])
    with pytest.raises(DegenerateInputError):
        convex_hull([(0, 0), (0, 0), (1, 1)])
    with pytest.raises(InvalidInputError):
        convex_hull([(0, 0), (1, 0), (0, math.nan)])
    with pytest.raises(InvalidInputError):
        convex_hull([1, 2, 3])


def test_hull_duplicates_map_back():
    pts = [(0, 0), (1, 0), (0, 1), (1, 0), (0.2, 0.2), (0, 0)]
    h = convex_hull(pts)
    assert set(h.vertex_ids) == {0, 1, 2}
    assert set(h.duplicate_ids) == {3, 5}
    assert h.area == pytest.approx(0.5)


def test_hull_matches_brute_force_on_random_sets():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n = int(rng.integers(3, 13))
        pts = rng.normal(size=(n, 2))
        try:
            h = convex_hull(pts)
        except DegenerateInputError:
            continue
        assert set(h.vertex_ids) == set(brute_hull_vertices(pts.tolist()))


def test_hull_on_integer_grid_with_many_collinear_points():
    g = np.array([(x, y) for x in range(6) for y in range(4)], dtype=float)
    h = convex_hull(g)
    corners = {tuple(g[i]) for i in h.vertex_ids}
    assert corners == {(0.0, 0.0), (5.0, 0.0), (5.0, 3.0), (0.0, 3.0)}
    assert h.area == 15.0


def test_hull_large_input_uses_prefilter_consistently():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(5000, 2))
    h = convex_hull(pts)
    small = convex_hull(pts[list(h.vertex_ids)])
    assert len(small) == len(h)
    assert small.area == pytest.approx(h.area, rel=1e-12)


point_sets = st.lists(
    st.tuples(st.floats(-100, 100), st.floats(-100, 100)), min_size=3, max_size=40, unique=True
)


@settings(max_examples=200, deadline=None)
@given(point_sets)
def test_hull_properties(pts):
    try:
        h = convex_hull(pts)
    except DegenerateInputError:
        return
    xy = np.asarray(pts)
    ring = xy[list(h.vertex_ids)].tolist()
    assert len(set(h.vertex_ids)) == len(h.vertex_ids) >= 3
    assert h.area > 0
    for i in range(len(ring)):
        a, b, c = ring[i], ring[(i + 1) % len(ring)], ring[(i + 2) % len(ring)]
        assert (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) > 0
    # a point dropped as collinear with an edge of length L sits within
    # min(L, eps / L) <= sqrt(eps) of the boundary
    tol = 4 * math.sqrt(orientation_tolerance(xy)) + 1e-12
    for p in pts:
        assert inside_or_on(ring, p, tol)


@settings(max_examples=100, deadline=None)
@given(
    st.integers(0, 2**32 - 1),
    st.floats(0, 2 * math.pi),
    st.floats(-50, 50),
    st.floats(-50, 50),
)
def test_hull_rigid_motion_equivariance(seed, angle, tx, ty):
    pts = np.random.default_rng(seed).uniform(-1, 1, size=(30, 2))
    c, s = math.cos(angle), math.sin(angle)
    moved = pts @ np.array([[c, s], [-s, c]]) + (tx, ty)
    a, b = convex_hull(pts), convex_hull(moved)
    assert set(a.vertex_ids) == set(b.vertex_ids)
    assert b.area == pytest.approx(a.area, rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_removing_a_point_never_grows_the_hull(seed):
    pts = np.random.default_rng(seed).normal(size=(20, 2))
    full = convex_hull(pts).area
    for i in range(len(pts)):
        assert convex_hull(np.delete(pts, i, axis=0)).area <= full + 1e-12


# ------------------------------------------------------------- hull_area


def test_hull_area_examples():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert hull_area(Hull((0, 1, 2, 3), 0.0), sq) == 1.0
    tri = [(0, 0), (4, 0), (0, 3)]
    assert hull_area(Hull((0, 1, 2), 0.0), tri) == 6.0
    assert hull_area(Hull((0, 1), 0.0), tri) == 0.0


def test_hull_area_bad_index():
    with pytest.raises(InvalidInputError):
        hull_area(Hull((0, 1, 7), 0.0), [(0, 0), (1, 0), (0, 1)])


# ------------------------------------------------------------- onion peel


def test_peel_concentric_squares():
    dec = onion_peel(concentric_squares())
    assert [len(layer) for layer in dec.layers] == [4, 4, 4]
    assert dec.areas == [36.0, 16.0, 4.0]
    assert [set(layer.vertex_ids) for layer in dec.layers] == [
        {8, 9, 10, 11}, {4, 5, 6, 7}, {0, 1, 2, 3}
    ]
    assert dec.residual_ids == ()


def test_peel_triangle_and_centroid():
    dec = onion_peel([(0, 0), (3, 0), (0, 3), (1, 1)])
    assert len(dec.layers) == 1
    assert set(dec.layers[0].vertex_ids) == {0, 1, 2}
    assert dec.residual_ids == (3,)


def test_peel_collinear_leftovers_go_to_residual():
    pts = [(-5, -5), (5, -5), (0, 5), (-1, 0), (0, 0), (1, 0), (2, 0)]
    dec = onion_peel(pts)
    assert len(dec.layers) == 1
    assert set(dec.residual_ids) == {3, 4, 5, 6}


def test_peel_needs_three_points():
    with pytest.raises(DegenerateInputError):
        onion_peel([(0, 0), (1, 1)])


def test_peel_depths():
    dec = onion_peel(concentric_squares())
    assert dec.depths(12).tolist() == [2] * 4 + [1] * 4 + [0] * 4


def test_peel_keeps_duplicates_in_their_layer():
    pts = concentric_squares() + [(3.0, 3.0), (1.0, -1.0)]
    dec = onion_peel(pts)
    assert set(dec.layers[0].member_ids) == {8, 9, 10, 11, 12}
    assert set(dec.layers[2].member_ids) == {0, 1, 2, 3, 13}


def assert_partition(dec, n):
    seen = [i for layer in dec.layers for i in layer.member_ids] + list(dec.residual_ids)
    assert sorted(seen) == list(range(n))
    areas = dec.areas
    assert all(a >= b for a, b in zip(areas, areas[1:]))


def test_peel_unit_disk_partition():
    rng = np.random.default_rng(11)
    r = np.sqrt(rng.random(50))
    t = rng.random(50) * 2 * np.pi
    pts = np.column_stack([r * np.cos(t), r * np.sin(t)])
    dec = onion_peel(pts)
    assert_partition(dec, 50)
    assert len(dec.residual_ids) <= 2


@settings(max_examples=100, deadline=None)
@given(point_sets)
def test_peel_partition_property(pts):
    assert_partition(onion_peel(pts), len(pts))


@pytest.mark.parametrize(
    "pts, want",
    [
        # a point next to the pivot must not merge two rays into one
        ([(0.0, 0.0), (0.0, 1.0), (5.252893961362886e-296, 0.0), (-1.0, 0.0), (-1.0, 1.0)], {1, 2, 3, 4}),
        # the nearer of two almost-collinear points sorts last and must not evict the farther one
        ([(0.0, 1.0), (0.0, 2.0), (2.225073858507203e-309, 0.0), (-1.0, 0.0)], {1, 2, 3}),
        # points strung along one ray out of the pivot arrive out of distance order
        ([(0.0, 0.0), (0.0, 3.0), (0.0, -1.0), (1.0, 0.0), (6.90720382408369e-110, 2.0),
          (2.3311845501203865e-153, 1.0)], {1, 2, 3}),
    ],
)
def test_hull_near_pivot_regressions(pts, want):
    assert set(convex_hull(pts).vertex_ids) == want


@pytest.mark.parametrize("tolerance", [None, 0.0])
def test_prefilter_never_drops_a_vertex(monkeypatch, tolerance):
    from onionpeel import geometry

    rng = np.random.default_rng(11)
    pts = np.vstack([rng.normal(size=(3000, 2)), rng.uniform(-3, 3, size=(3000, 2))])
    fast = convex_hull(pts, tolerance)
    monkeypatch.setattr(geometry, "_PREFILTER_MIN", len(pts) + 1)
    slow = convex_hull(pts, tolerance)
    assert fast == slow
