"""General position, self-intersection events and loop elimination.

Loop removal cuts a polyline at a self-intersection ``p(t1) = p(t2)`` and
drops the sub-chain between the two parameters.  Repeating it on the first
intersection (in parameter order) yields a simple polyline whose rotation has
not increased, provided every removed loop turns by more than -pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _segments as seg
from .errors import (
    AcoPreconditionViolated,
    GeneralPositionFailed,
    InternalInconsistency,
    LoopRotationTooNegative,
    NotGeneralPosition,
)
from .geom_core import (
    EPS_ANGLE,
    TWO_PI,
    Polyline,
    Vec2,
    aco_open,
    geom_eps,
    rot,
    signed_angle,
)

MAX_PERTURB_TRIES = 64


@dataclass(frozen=True)
class IntersectionEvent:
    """A self-intersection between geometric edges ``edge1 < edge2``.

    ``t1``/``t2`` are normalised arc-length parameters of the whole chain,
    ``u1``/``u2`` the local parameters along the two edges.
    """

    t1: float
    t2: float
    point: Vec2
    edge1: int = 0
    edge2: int = 0
    u1: float = 0.0
    u2: float = 0.0


def _points(p: Polyline) -> list[tuple[float, float]]:
    return list(p.geometric_points)


def _adjacent(i: int, j: int, m: int, closed: bool) -> bool:
    return j == i + 1 or (closed and i == 0 and j == m - 1)


def _cumulative(pts):
    cum = [0.0]
    for a, b in zip(pts, pts[1:]):
        cum.append(cum[-1] + math.hypot(b[0] - a[0], b[1] - a[1]))
    return cum


def is_general_position(p: Polyline) -> bool:
    """Distinct vertices; edges meet at most once, either at their shared
    vertex or in both relative interiors; no point on three edges."""
    pts = _points(p)
    m = len(pts) - 1
    tol = geom_eps(pts)
    verts = np.asarray(pts[:-1] if p.closed else pts)
    if len(verts) > 1:
        d = np.hypot(verts[:, None, 0] - verts[None, :, 0], verts[:, None, 1] - verts[None, :, 1])
        np.fill_diagonal(d, np.inf)
        if d.min() <= tol:
            return False
    crossings = []
    for i, j in seg.candidate_pairs(pts, tol):
        hit = seg.intersect(pts[i], pts[i + 1], pts[j], pts[j + 1], tol)
        if hit is None:
            continue
        if hit.kind != "point":
            return False
        if _adjacent(i, j, m, p.closed):
            continue
        li = math.dist(pts[i], pts[i + 1])
        lj = math.dist(pts[j], pts[j + 1])
        if min(hit.t, 1 - hit.t) * li <= tol or min(hit.u, 1 - hit.u) * lj <= tol:
            return False
        crossings.append((hit.x, hit.y))
    for a in range(len(crossings)):
        for b in range(a + 1, len(crossings)):
            if math.dist(crossings[a], crossings[b]) <= tol:
                return False
    return True


def perturb_general_position(p: Polyline, magnitude: Optional[float] = None, seed: int = 0) -> Polyline:
    """Move every vertex by a seeded random offset of norm below ``magnitude``
    until the chain is in general position.  Virtual shifts are dropped."""
    pts = _points(p)
    if magnitude is None:
        magnitude = 1e-7 * geom_eps(pts) / 1e-9
    if magnitude <= 0:
        raise ValueError("perturbation magnitude must be positive")
    rng = np.random.default_rng(seed)
    base = np.asarray(pts[:-1] if p.closed else pts, dtype=float)
    for _ in range(MAX_PERTURB_TRIES):
        ang = rng.uniform(0.0, TWO_PI, len(base))
        rad = magnitude * np.sqrt(rng.uniform(0.0, 1.0, len(base))) * (1 - 1e-9)
        moved = base + np.column_stack((rad * np.cos(ang), rad * np.sin(ang)))
        try:
            cand = Polyline.from_points([tuple(v) for v in moved], closed=p.closed)
        except Exception:
            continue
        if is_general_position(cand):
            return cand
    raise GeneralPositionFailed(f"no general position after {MAX_PERTURB_TRIES} draws")


def _events(pts, closed: bool, tol: float) -> list[tuple[int, float, int, float, float, float]]:
    m = len(pts) - 1
    out = []
    for i, j in seg.candidate_pairs(pts, tol):
        if _adjacent(i, j, m, closed):
            continue
        hit = seg.intersect(pts[i], pts[i + 1], pts[j], pts[j + 1], tol)
        if hit is not None:
            out.append((i, hit.t, j, hit.u, hit.x, hit.y))
    out.sort()
    return out


def _to_event(ev, pts) -> IntersectionEvent:
    i, u1, j, u2, x, y = ev
    cum = _cumulative(pts)
    total = cum[-1]
    t1 = (cum[i] + u1 * (cum[i + 1] - cum[i])) / total
    t2 = (cum[j] + u2 * (cum[j + 1] - cum[j])) / total
    return IntersectionEvent(t1, t2, Vec2(x, y), i, j, u1, u2)


def self_intersection_events(p: Polyline) -> list[IntersectionEvent]:
    pts = _points(p)
    return [_to_event(ev, pts) for ev in _events(pts, p.closed, geom_eps(pts))]


def first_self_intersection(p: Polyline) -> Optional[IntersectionEvent]:
    """The event with the smallest ``t1`` (then ``t2``), or None if simple."""
    if not is_general_position(p):
        raise NotGeneralPosition("first_self_intersection needs general position")
    pts = _points(p)
    evs = _events(pts, p.closed, geom_eps(pts))
    return _to_event(evs[0], pts) if evs else None


def _directions(pts) -> list[Vec2]:
    return [Vec2(b[0] - a[0], b[1] - a[1]) for a, b in zip(pts, pts[1:])]


def loop_rotation(p: Polyline, e: IntersectionEvent) -> float:
    """Rotation of the sub-chain between the two parameters of ``e``."""
    dirs = _directions(_points(p))
    return math.fsum(signed_angle(dirs[k], dirs[k + 1]) for k in range(e.edge1, e.edge2))


@dataclass
class _Node:
    x: float
    y: float
    src: tuple  # ("v", k) for an input vertex, ("x", i, j) for a crossing of input edges i, j
    t_in: float
    t_out: float


@dataclass
class LoopElimination:
    """Result of loop elimination plus provenance against the input chain."""

    result: Polyline
    events: list[IntersectionEvent] = field(default_factory=list)
    removed: list[tuple[float, float]] = field(default_factory=list)
    edge_source: list[int] = field(default_factory=list)
    vertex_source: list[tuple] = field(default_factory=list)
    rotations: list[float] = field(default_factory=list)


def _splice(nodes, edge_src, ev, total_cum, tol):
    """Apply one loop removal to the node list; returns new nodes, edges and
    the removed parameter interval (in input-chain parameters)."""
    i, u1, j, u2, x, y = ev

    def param(k, u):
        a, b = nodes[k].t_out, nodes[k + 1].t_in
        return a + u * (b - a)

    t_a, t_b = param(i, u1), param(j, u2)
    xnode = _Node(x, y, ("x", edge_src[i], edge_src[j]), t_a, t_b)
    near_i = math.dist((x, y), (nodes[i].x, nodes[i].y)) <= tol
    near_j = math.dist((x, y), (nodes[j + 1].x, nodes[j + 1].y)) <= tol
    if near_i and not near_j:
        head = nodes[:i] + [_Node(nodes[i].x, nodes[i].y, nodes[i].src, nodes[i].t_in, t_b)]
        return head + nodes[j + 1:], edge_src[:i] + edge_src[j:], (t_a, t_b)
    if near_j and not near_i:
        tail = [_Node(nodes[j + 1].x, nodes[j + 1].y, nodes[j + 1].src, t_a, nodes[j + 1].t_out)]
        return nodes[:i + 1] + tail + nodes[j + 2:], edge_src[:i + 1] + edge_src[j + 1:], (t_a, t_b)
    return nodes[:i + 1] + [xnode] + nodes[j + 1:], edge_src[:i + 1] + edge_src[j:], (t_a, t_b)


def _build(nodes, closed: bool) -> Polyline:
    pts = [(n.x, n.y) for n in nodes]
    if closed:
        pts = pts[:-1]
    return Polyline.from_points(pts, closed=closed)


def remove_loop(p: Polyline, e: IntersectionEvent) -> Polyline:
    """Cut out the sub-chain between ``e.t1`` and ``e.t2``, joining at ``e.point``."""
    r = loop_rotation(p, e)
    if r <= -math.pi:
        raise LoopRotationTooNegative(f"loop rotation {r:.12g} <= -pi")
    pts = _points(p)
    tol = geom_eps(pts)
    cum = _cumulative(pts)
    nodes = [_Node(x, y, ("v", k), cum[k] / cum[-1], cum[k] / cum[-1]) for k, (x, y) in enumerate(pts)]
    ev = (e.edge1, e.u1, e.edge2, e.u2, e.point.x, e.point.y)
    nodes, _, _ = _splice(nodes, list(range(len(pts) - 1)), ev, cum, tol)
    return _build(nodes, p.closed)


def eliminate_loops_traced(p: Polyline, check_aco: bool = True) -> LoopElimination:
    if check_aco:
        a = aco_open(p).value
        if a <= -math.pi + EPS_ANGLE:
            raise AcoPreconditionViolated(f"aco = {a:.12g} <= -pi")
    if not is_general_position(p):
        raise NotGeneralPosition("loop elimination needs general position")
    pts = _points(p)
    tol = geom_eps(pts)
    cum = _cumulative(pts)
    nodes = [_Node(x, y, ("v", k), cum[k] / cum[-1], cum[k] / cum[-1]) for k, (x, y) in enumerate(pts)]
    edge_src = list(range(len(pts) - 1))
    trace = LoopElimination(p)
    current = p.without_virtual()
    trace.rotations.append(rot(current))
    while True:
        cur_pts = [(n.x, n.y) for n in nodes]
        evs = _events(cur_pts, p.closed, tol)
        if not evs:
            break
        ev = evs[0]
        event = _to_event(ev, cur_pts)
        dirs = _directions(cur_pts)
        loop_rot = math.fsum(signed_angle(dirs[k], dirs[k + 1]) for k in range(ev[0], ev[2]))
        if loop_rot <= -math.pi:
            raise LoopRotationTooNegative(f"loop rotation {loop_rot:.12g} <= -pi")
        nodes, edge_src, interval = _splice(nodes, edge_src, ev, cum, tol)
        current = _build(nodes, p.closed)
        r = rot(current)
        change = trace.rotations[-1] - r
        if change < -1e-9 or abs(change - TWO_PI * round(change / TWO_PI)) > 1e-9:
            raise InternalInconsistency(f"loop removal changed rotation by {-change:.12g}")
        trace.events.append(event)
        trace.removed.append(interval)
        trace.rotations.append(r)
        if len(trace.events) > len(pts) ** 2:
            raise InternalInconsistency("loop elimination does not terminate")
    trace.result = current
    trace.edge_source = edge_src
    trace.vertex_source = [n.src for n in nodes]
    return trace


def eliminate_loops(p: Polyline) -> Polyline:
    """Remove loops first-in-parameter-order until the chain is simple."""
    return eliminate_loops_traced(p).result
