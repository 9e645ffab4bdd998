import numpy as np
import pytest
from hypothesis import given, strategies as st

from aconvex.errors import AcoPreconditionViolated, RotationsDiffer, StartsNotAligned, TagMismatch
from aconvex._segments import orient, point_segment_distance
from aconvex.geom_core import Polyline, Shift, Vec2, aco_open, geom_eps, is_opposite, rot
from aconvex.sorted_sum import FROM_P, FROM_Q, drop_virtual, param_maps, sorted_sum, uniform_point, validate_pair
from conftest import chain_pairs


def chain(*pts):
    return Polyline.from_points(pts)


def shift_vectors(p):
    return [s.vector.as_tuple() for s in p.shifts]


def test_validate_pair_examples():
    validate_pair(chain((0, 0), (1, 0)), chain((0, 0), (2, 0)))
    with pytest.raises(StartsNotAligned):
        validate_pair(chain((0, 0), (1, 0)), chain((0, 0), (0, 1)))
    with pytest.raises(RotationsDiffer):
        validate_pair(chain((0, 0), (1, 0), (1, 1)), chain((0, 0), (1, 0), (2, 0)))


def test_single_edges_tie_prefers_first():
    p, q = chain((0, 0), (1, 0)), chain((0, 0), (2, 0))
    m = sorted_sum(p, q)
    assert [v.as_tuple() for v in m.result.vertices] == [(0, 0), (1, 0), (3, 0)]
    assert m.tags == (FROM_P, FROM_Q)


def test_convex_chains_merge_by_slope():
    p = chain((0, 0), (1, 0), (1, 1))
    q = chain((0, 0), (2, 0), (2, 2))
    m = sorted_sum(p, q)
    assert shift_vectors(m.result) == [(1, 0), (2, 0), (0, 1), (0, 2)]


def test_param_map_breakpoints_for_single_edges():
    p, q = chain((0, 0), (1, 0)), chain((0, 0), (2, 0))
    phi, psi = param_maps(sorted_sum(p, q), p, q)
    assert phi.breakpoints == ((0.0, 0.0), (0.5, 1.0), (1.0, 1.0))
    assert psi.breakpoints == ((0.0, 0.0), (0.5, 0.0), (1.0, 1.0))
    m = sorted_sum(p, q)
    assert uniform_point(m.result, 0.0) == uniform_point(p, 0.0) + uniform_point(q, 0.0)


def test_param_maps_reject_foreign_chain():
    p, q = chain((0, 0), (1, 0)), chain((0, 0), (2, 0))
    other = chain((0, 0), (3, 0))
    with pytest.raises(TagMismatch):
        param_maps(sorted_sum(p, q), p, other)


def test_rejects_deep_reflex_chain():
    # turns -pi/2, -pi/2, -pi/2, +pi/2, +pi/2: rot -pi/2 with a window of -3pi/2
    p = chain((0, 0), (1, 0), (1, -1), (0, -1), (0, -0.5), (-1, -0.5), (-1, -2))
    q = chain((0, 0), (1, 0), (1, -1))
    assert rot(p) == pytest.approx(rot(q))
    with pytest.raises(AcoPreconditionViolated):
        sorted_sum(p, q)


def test_drop_virtual_keeps_tags():
    p = Polyline(Vec2(0, 0), (Shift.virtual_edge(Vec2(1, 0)), Shift.of(Vec2(0, 1))))
    q = chain((0, 0), (1, 0), (1, 1))
    m = drop_virtual(sorted_sum(p, q))
    assert all(not s.virtual for s in m.result.shifts)
    assert len(m.tags) == len(m.result.shifts) == 3


def _in_parallelogram(z, a0, a1, b0, b1, tol):
    """z in segment a + segment b (a parallelogram, possibly flat)."""
    corners = [a0 + b0, a1 + b0, a1 + b1, a0 + b1]
    pts = [c.as_tuple() for c in corners]
    zt = z.as_tuple()
    signs = [orient(pts[i], pts[(i + 1) % 4], zt) for i in range(4)]
    if all(s >= -tol for s in signs) or all(s <= tol for s in signs):
        return True
    return min(point_segment_distance(zt, pts[i], pts[(i + 1) % 4]) for i in range(4)) <= tol


def _in_chain_sum(z, p, q, tol):
    pv, qv = p.vertices, q.vertices
    return any(_in_parallelogram(z, pv[i], pv[i + 1], qv[j], qv[j + 1], tol)
               for i in range(len(pv) - 1) for j in range(len(qv) - 1))


@given(chain_pairs)
def test_sorted_sum_keeps_rotation_and_aco(pair):
    p, q = pair
    m = sorted_sum(p, q)
    r = m.result
    assert not any(is_opposite(a.direction, b.direction) for a, b in zip(r.shifts, r.shifts[1:]))
    assert rot(r) == pytest.approx(rot(p), abs=1e-9)
    assert aco_open(r).value >= min(aco_open(p).value, aco_open(q).value) - 1e-9
    assert len(r.shifts) == len(p.shifts) + len(q.shifts)
    assert m.shifts_from(FROM_P) == list(p.shifts)
    assert m.shifts_from(FROM_Q) == list(q.shifts)
    assert (r.end - (p.end + q.end)).norm() <= 1e-9


@given(chain_pairs, st.lists(st.floats(0, 1), min_size=1, max_size=20))
def test_param_identity(pair, ts):
    p, q = pair
    m = sorted_sum(p, q)
    phi, psi = param_maps(m, p, q)
    for t in ts + [0.0, 1.0]:
        err = uniform_point(m.result, t) - uniform_point(p, phi(t)) - uniform_point(q, psi(t))
        assert err.norm() <= 1e-9
    for f in (phi, psi):
        vals = [v for _, v in f.breakpoints]
        assert vals[0] == 0.0 and vals[-1] == 1.0
        assert all(b >= a for a, b in zip(vals, vals[1:]))


@given(chain_pairs)
def test_sorted_sum_lies_in_chain_sum(pair):
    p, q = pair
    r = sorted_sum(p, q).result
    tol = 10 * geom_eps(list(p.vertices) + list(q.vertices) + list(r.vertices))
    for t in np.linspace(0, 1, 7):
        assert _in_chain_sum(uniform_point(r, float(t)), p, q, tol)
