import math

import numpy as np
import pytest
from hypothesis import given

from aconvex import _segments as seg
from aconvex.errors import AcoPreconditionViolated, PointInsidePolygon
from aconvex.geom_core import Polygon, Vec2, aco_polygon
from aconvex.separation import (
    AngularRegion,
    bisector_rotation,
    build_region,
    direction_rotation,
    edge_site,
    fan_site,
    gamma_minus,
    gamma_plus,
    region_contains,
    region_disjoint,
    separate,
)
from conftest import certified, convex_polygons, rng_of, seeds

U_SHAPE = [(0, 0), (4, 0), (4, 4), (3, 4), (3, 1), (1, 1), (1, 3.5), (2.8, 3.5), (2.8, 4), (0, 4)]


def exterior_point(k, seed):
    rng = rng_of(seed)
    x0, y0, x1, y1 = k.bbox()
    w, h = x1 - x0, y1 - y0
    verts = np.asarray([v.as_tuple() for v in k.vertices])
    while True:
        x, y = rng.uniform(x0 - 0.3 * w, x1 + 0.3 * w), rng.uniform(y0 - 0.3 * h, y1 + 0.3 * h)
        px, py = np.array([x]), np.array([y])
        if not seg.points_in_polygon(px, py, verts)[0] and seg.distance_to_ring(px, py, verts)[0] > 1e3 * k.eps:
            return Vec2(x, y)


def test_gammas_on_convex_polygon(square):
    for i in range(4):
        site = edge_site(square, i, 0.3)
        assert gamma_plus(square, site) == 0.0 and gamma_minus(square, site) == 0.0


def test_gamma_plus_before_reflex_vertex(lshape):
    # edge 2 runs (2,1) -> (1,1) and ends at the reflex vertex
    assert gamma_plus(lshape, edge_site(lshape, 2)) == pytest.approx(-math.pi / 2)
    assert gamma_minus(lshape, edge_site(lshape, 2)) == 0.0
    assert gamma_minus(lshape, edge_site(lshape, 3)) == pytest.approx(-math.pi / 2)


def test_fan_site_splits_the_turn(lshape):
    # halfway through the reflex turn at (1, 1)
    site = fan_site(lshape, 3, 0.5)
    assert gamma_plus(lshape, site) == pytest.approx(-math.pi / 4)
    assert gamma_minus(lshape, site) == pytest.approx(-math.pi / 4)


def test_convex_edge_region_is_half_plane(square):
    r = build_region(square, edge_site(square, 0))
    assert r.measure == pytest.approx(math.pi)
    assert region_disjoint(r, square)
    assert region_contains(r, Vec2(0.5, -1.0)) and not region_contains(r, Vec2(0.5, 0.5))


def test_lshape_region_measure(lshape):
    for i in range(len(lshape)):
        r = build_region(lshape, edge_site(lshape, i))
        assert r.measure >= math.pi / 2 - 1e-12
        assert region_disjoint(r, lshape)


def test_separate_square(square):
    w = separate(square, Vec2(2, 0.5))
    assert w.apex == Vec2(2, 0.5)
    assert w.measure == pytest.approx(math.pi)
    assert region_disjoint(w, square)


def test_separate_needs_vertex_fan(square):
    # diagonal to the corner (1, 1): no edge-interior site sees (2, 2) head on
    w = separate(square, Vec2(2, 2))
    assert w.measure == pytest.approx(math.pi)
    assert region_disjoint(w, square)
    assert region_contains(w, Vec2(3, 3))


def test_separate_rejects_inside_and_boundary(square):
    with pytest.raises(PointInsidePolygon):
        separate(square, Vec2(0.5, 0.5))
    with pytest.raises(PointInsidePolygon):
        separate(square, Vec2(1.0, 0.5))


def test_separate_rejects_uncertified(square):
    with pytest.raises(AcoPreconditionViolated):
        separate(Polygon.from_points(U_SHAPE), Vec2(10, 10))


def test_region_contains_examples():
    r = AngularRegion(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), math.pi / 2)
    assert region_contains(r, Vec2(1, 1))
    assert not region_contains(r, Vec2(-1, 0))
    assert region_contains(r, Vec2(0, 0))


def test_region_disjoint_examples(square):
    beside = AngularRegion(Vec2(2, 0.5), Vec2(0, -1), Vec2(0, 1), math.pi)
    assert region_disjoint(beside, square)
    poking = AngularRegion(Vec2(2, 0.5), Vec2(0, 1), Vec2(0, -1), math.pi)
    assert not region_disjoint(poking, square)
    with pytest.raises(ValueError):
        AngularRegion(Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), 0.0)


@given(certified, seeds)
def test_witness_is_valid(k, seed):
    x = exterior_point(k, seed)
    w = separate(k, x)
    assert w.apex == x
    assert w.measure >= math.pi + aco_polygon(k).value - 1e-6
    assert region_disjoint(w, k)


@given(convex_polygons, seeds)
def test_convex_witness_is_half_plane(k, seed):
    x = exterior_point(k, seed)
    w = separate(k, x)
    assert w.measure >= math.pi - 1e-9
    assert not any(region_contains(w, v) and not _on_rays(w, v) for v in k.vertices)


def _on_rays(w, v, tol=1e-9):
    z = v - w.apex
    return abs(z.x * w.ray1_dir.y - z.y * w.ray1_dir.x) <= tol or abs(z.x * w.ray2_dir.y - z.y * w.ray2_dir.x) <= tol


@given(certified)
def test_gamma_sum_bounded_by_aco(k):
    a = aco_polygon(k).value
    for i in range(len(k)):
        for site in (edge_site(k, i), fan_site(k, i, 0.37)):
            assert gamma_plus(k, site) + gamma_minus(k, site) >= a - 1e-9


@given(certified)
def test_gammas_constant_along_an_edge(k):
    for i in range(len(k)):
        vals = {(gamma_plus(k, edge_site(k, i, t)), gamma_minus(k, edge_site(k, i, t)))
                for t in np.linspace(0.05, 0.95, 9)}
        assert len(vals) == 1


@given(certified, seeds)
def test_degree_checks(k, seed):
    assert bisector_rotation(k, per_edge=4, per_fan=32) == pytest.approx(2 * math.pi, abs=1e-6)
    x = exterior_point(k, seed)
    assert direction_rotation(k, x, per_edge=64) == pytest.approx(0.0, abs=1e-6)
