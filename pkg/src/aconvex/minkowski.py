"""Minkowski sums of simple polygons by sorted-sum convolution.

Both boundaries are cut at their bottom-left vertex (padded with zero-length
virtual edges so both open chains start and end heading along +x) and merged
with the sorted sum.  That single merged cycle pairs each edge with only one
supporting vertex of the other polygon, which is not always enough when the
tangent of a non-convex boundary sweeps past a direction several times.  The
boundary of the sum is therefore taken as the outer face of the full
convolution: every edge of one polygon translated by every convex vertex of
the other whose turn sweeps over that edge's direction.  Inputs must both have
aco > -pi, so the sum has no holes and the outer face is all of its boundary.

``cycle_sum`` runs the merged cycle alone (closing it and removing loops in
parameter order) for comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _segments as seg
from ._arrangement import outer_boundary
from .errors import (
    AcoPreconditionViolated,
    GeometryError,
    InternalInconsistency,
    NotConvex,
)
from .geom_core import (
    EPS_ANGLE,
    TWO_PI,
    Polygon,
    Polyline,
    Shift,
    Vec2,
    aco_polygon,
    ccw_angle,
    geom_eps,
    is_simple,
    merge_collinear,
    orient_ccw,
    rot,
    signed_angle,
)
from .simplify import eliminate_loops_traced, is_general_position, perturb_general_position
from .sorted_sum import MergedChain, drop_virtual, sorted_sum

EAST = Vec2(1.0, 0.0)


@dataclass(frozen=True)
class CertReport:
    aco_k: float
    aco_l: float
    certified: bool
    aco_lower_bound: float

    def as_pairs(self) -> list[tuple[str, object]]:
        return [("certified", self.certified), ("aco_k", self.aco_k),
                ("aco_l", self.aco_l), ("bound", self.aco_lower_bound)]


@dataclass(frozen=True)
class SumResult:
    polygon: Polygon
    certificate: CertReport
    trace: MergedChain
    loops_removed: int = 0
    perturbed: bool = False
    exact_vertices: bool = True
    removed_intervals: tuple[tuple[float, float], ...] = field(default=())
    segments: int = 0


def certify(k: Polygon, l: Polygon) -> CertReport:
    """Check the hole-freeness hypothesis: both aco values above -pi."""
    ak, al = aco_polygon(k).value, aco_polygon(l).value
    ok = ak > -math.pi + EPS_ANGLE and al > -math.pi + EPS_ANGLE
    return CertReport(ak, al, ok, min(ak, al))


def bottom_left_index(k: Polygon) -> int:
    verts = k.vertices
    return min(range(len(verts)), key=lambda i: (verts[i].y, verts[i].x))


def cut_chain(k: Polygon) -> Polyline:
    """Open the boundary at its bottom-left vertex as a chain from +x to +x."""
    c = bottom_left_index(k)
    shifts = list(k.boundary.shifts[c:] + k.boundary.shifts[:c])
    if abs(signed_angle(EAST, shifts[0].direction)) > EPS_ANGLE:
        shifts.insert(0, Shift.virtual_edge(EAST))
    shifts.append(Shift.virtual_edge(EAST))
    return Polyline(k.vertices[c], tuple(shifts))


def align_cycles(k: Polygon, l: Polygon) -> tuple[Polyline, Polyline]:
    return cut_chain(k), cut_chain(l)


def _close(chain: Polyline) -> list[tuple[float, float]]:
    """Vertices of the merged chain as a closed ring."""
    pts = list(chain.geometric_points)
    pts[-1] = pts[0]
    return pts[:-1]


def _clean_ring(pts: list[tuple[float, float]], tol: float) -> list[tuple[float, float]]:
    """Drop repeated points and zero-width spikes from a closed ring."""
    pts = list(pts)
    changed = True
    while changed and len(pts) > 2:
        changed = False
        for i in range(len(pts)):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            if math.dist(a, b) <= tol:
                del pts[i]
                changed = True
                break
            u = (b[0] - a[0], b[1] - a[1])
            v = (c[0] - b[0], c[1] - b[1])
            cross = u[0] * v[1] - u[1] * v[0]
            if u[0] * v[0] + u[1] * v[1] < 0 and abs(cross) <= tol * (math.hypot(*u) + math.hypot(*v)):
                del pts[i]
                changed = True
                break
    return pts


def _line_cross(a0, a1, b0, b1):
    d1 = (a1[0] - a0[0], a1[1] - a0[1])
    d2 = (b1[0] - b0[0], b1[1] - b0[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(den) <= EPS_ANGLE * math.hypot(*d1) * math.hypot(*d2):
        return None
    e = (b0[0] - a0[0], b0[1] - a0[1])
    t = (e[0] * d2[1] - e[1] * d2[0]) / den
    return (a0[0] + t * d1[0], a0[1] + t * d1[1])


def _restore(trace, ring: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Recompute loop-eliminated vertices from the unperturbed ring."""
    m = len(ring)
    perturbed = list(trace.result.geometric_points)
    out = []
    for src, fallback in zip(trace.vertex_source, perturbed):
        if src[0] == "v":
            out.append(ring[src[1] % m])
        else:
            i, j = src[1], src[2]
            hit = _line_cross(ring[i], ring[(i + 1) % m], ring[j], ring[(j + 1) % m])
            out.append(hit if hit is not None else fallback)
    return out[:-1]


def _as_polygon(pts) -> Polygon:
    return Polygon.from_points(pts)


def _require(k: Polygon, l: Polygon) -> CertReport:
    cert = certify(k, l)
    if not cert.certified:
        raise AcoPreconditionViolated(
            f"aco K = {cert.aco_k:.12g}, aco L = {cert.aco_l:.12g}; both must exceed -pi")
    return cert


def _supports(turn_from: Vec2, turn: float, d: Vec2) -> bool:
    """Whether direction ``d`` lies in the counterclockwise sweep of a convex
    vertex that turns by ``turn`` starting from ``turn_from``."""
    a = ccw_angle(turn_from, d)
    if a > TWO_PI - EPS_ANGLE:
        a = 0.0
    return a <= turn + EPS_ANGLE


def _half_convolution(a: Polygon, b: Polygon) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Edges of ``a`` translated by the convex vertices of ``b`` supporting them."""
    out = []
    av, bv = a.vertices, b.vertices
    bs = b.boundary.shifts
    m = len(bv)
    for i, s in enumerate(a.boundary.shifts):
        p0, p1 = av[i], av[(i + 1) % len(av)]
        for j in range(m):
            d_in, d_out = bs[j - 1].direction, bs[j].direction
            turn = signed_angle(d_in, d_out)
            if turn >= -EPS_ANGLE and _supports(d_in, max(turn, 0.0), s.direction):
                w = bv[j]
                out.append(((p0.x + w.x, p0.y + w.y), (p1.x + w.x, p1.y + w.y)))
    return out


def convolution_segments(k: Polygon, l: Polygon) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Segments ``e + v`` (edge of one polygon, supporting convex vertex of the
    other).  Every boundary point of K + L lies on one of them."""
    return _half_convolution(k, l) + _half_convolution(l, k)


def _validate(polygon: Polygon, cert: CertReport) -> None:
    if abs(rot(polygon.boundary) - TWO_PI) > 1e-9:
        raise InternalInconsistency("sum boundary rotation is not 2*pi")
    a = aco_polygon(polygon).value
    if a < cert.aco_lower_bound - EPS_ANGLE:
        raise InternalInconsistency(f"aco of sum {a:.12g} below bound {cert.aco_lower_bound:.12g}")


def minkowski_sum(k: Polygon, l: Polygon) -> SumResult:
    """Certified Minkowski sum of two simple polygons with aco > -pi."""
    cert = _require(k, l)
    trace = drop_virtual(sorted_sum(*align_cycles(k, l)))
    segs = convolution_segments(k, l)
    tol = geom_eps([p for s in segs for p in s])
    ring = _clean_ring(outer_boundary(segs, tol), tol)
    pts = merge_collinear([Vec2(*p) for p in ring])
    try:
        polygon = _as_polygon(pts)
    except GeometryError as exc:
        raise InternalInconsistency(f"sum boundary is not a simple CCW polygon: {exc}") from exc
    _validate(polygon, cert)
    return SumResult(polygon, cert, trace, segments=len(segs))


def cycle_sum(k: Polygon, l: Polygon, seed: int = 0) -> SumResult:
    """The merged cycle alone: sorted sum of the aligned boundaries, closed,
    then loop elimination.  Always a subset of K + L, not always all of it."""
    cert = _require(k, l)
    p, q = align_cycles(k, l)
    merged = sorted_sum(p, q)
    trace = drop_virtual(merged)
    ring = _close(trace.result)
    tol = geom_eps(ring)
    ring = _clean_ring(ring, tol)
    try:
        closed = Polyline.from_points(ring, closed=True)
    except GeometryError as exc:
        raise InternalInconsistency(f"merged chain is not a valid closed polyline: {exc}") from exc

    loops = 0
    perturbed = False
    exact = True
    removed: tuple = ()
    if is_simple(closed):
        pts = ring
    else:
        work = closed
        if not is_general_position(closed):
            work = perturb_general_position(closed, seed=seed)
            perturbed = True
        try:
            elim = eliminate_loops_traced(work)
        except GeometryError as exc:
            raise InternalInconsistency(f"loop elimination failed: {exc}") from exc
        loops = len(elim.events)
        removed = tuple(elim.removed)
        pts = _clean_ring(_restore(elim, ring), tol)
        if perturbed and not _valid(pts, cert):
            pts = _clean_ring(list(elim.result.geometric_points[:-1]), tol)
            exact = False
    try:
        polygon = _as_polygon(pts)
    except GeometryError as exc:
        raise InternalInconsistency(f"cycle boundary is not a simple CCW polygon: {exc}") from exc
    _validate(polygon, cert)
    return SumResult(polygon, cert, trace, loops, perturbed, exact, removed)


def _valid(pts, cert: CertReport) -> bool:
    try:
        poly = _as_polygon(pts)
    except GeometryError:
        return False
    return aco_polygon(poly).value >= cert.aco_lower_bound - EPS_ANGLE


def _is_convex(k: Polygon) -> bool:
    return all(a >= -EPS_ANGLE for a in k.boundary.turn_angles())


def convex_sum(k: Polygon, l: Polygon) -> Polygon:
    """Classic Minkowski sum of convex polygons by merging edges in slope order."""
    if not (_is_convex(k) and _is_convex(l)):
        raise NotConvex("convex_sum needs two convex polygons")

    def edges(poly):
        c = bottom_left_index(poly)
        sh = poly.boundary.shifts[c:] + poly.boundary.shifts[:c]
        out = []
        for s in sh:
            a = math.atan2(s.vector.y, s.vector.x)
            out.append((a + TWO_PI if a < 0 else a, s.vector))
        return out

    ek, el = edges(k), edges(l)
    i = j = 0
    vecs = []
    while i < len(ek) or j < len(el):
        if j == len(el) or (i < len(ek) and ek[i][0] <= el[j][0]):
            vecs.append(ek[i][1])
            i += 1
        else:
            vecs.append(el[j][1])
            j += 1
    start = k.vertices[bottom_left_index(k)] + l.vertices[bottom_left_index(l)]
    pts = [start]
    for v in vecs[:-1]:
        pts.append(pts[-1] + v)
    return Polygon.from_points(merge_collinear(pts))


def reflect(k: Polygon) -> Polygon:
    """Point reflection through the origin, re-oriented counterclockwise."""
    return orient_ccw([-v for v in k.vertices])


def no_fit_polygon(a: Polygon, b: Polygon) -> SumResult:
    """The set of translations of ``a`` that make it meet ``b``: (-A) + B."""
    return minkowski_sum(reflect(a), b)


def _contains_closed(k: Polygon, p: tuple[float, float]) -> bool:
    verts = np.asarray([v.as_tuple() for v in k.vertices])
    if seg.points_in_polygon(np.array([p[0]]), np.array([p[1]]), verts)[0]:
        return True
    return seg.distance_to_ring(np.array([p[0]]), np.array([p[1]]), verts)[0] <= k.eps


def member(k: Polygon, l: Polygon, p: Vec2) -> bool:
    """Whether ``p`` lies in K + L, decided from the definition: K meets p - L."""
    kv = [v.as_tuple() for v in k.vertices]
    mv = [(p.x - v.x, p.y - v.y) for v in l.vertices]
    tol = max(k.eps, l.eps)
    n, m = len(kv), len(mv)
    for i in range(n):
        a0, a1 = kv[i], kv[(i + 1) % n]
        for j in range(m):
            if seg.intersect(a0, a1, mv[j], mv[(j + 1) % m], tol) is not None:
                return True
    if _contains_closed(l, (p.x - kv[0][0], p.y - kv[0][1])):
        return True
    return bool(_contains_closed(k, mv[0]))


def member_many(k: Polygon, l: Polygon, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorised ``member`` over many probes.  Boundary contacts are not
    resolved, so probes on the boundary of K + L may go either way."""
    xs = np.asarray(xs, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()
    kv = np.asarray([v.as_tuple() for v in k.vertices])
    lv = np.asarray([v.as_tuple() for v in l.vertices])
    # edges of p - L, shape (m, P)
    b0x = xs[None, :] - lv[:, 0, None]
    b0y = ys[None, :] - lv[:, 1, None]
    b1x = np.roll(b0x, -1, axis=0)
    b1y = np.roll(b0y, -1, axis=0)
    hit = np.zeros(xs.shape, dtype=bool)
    n = len(kv)
    for i in range(n):
        ax0, ay0 = kv[i]
        ax1, ay1 = kv[(i + 1) % n]
        o1 = (ax1 - ax0) * (b0y - ay0) - (ay1 - ay0) * (b0x - ax0)
        o2 = (ax1 - ax0) * (b1y - ay0) - (ay1 - ay0) * (b1x - ax0)
        o3 = (b1x - b0x) * (ay0 - b0y) - (b1y - b0y) * (ax0 - b0x)
        o4 = (b1x - b0x) * (ay1 - b0y) - (b1y - b0y) * (ax1 - b0x)
        hit |= np.any((o1 * o2 < 0) & (o3 * o4 < 0), axis=0)
    hit |= seg.points_in_polygon(xs - kv[0, 0], ys - kv[0, 1], lv)
    hit |= seg.points_in_polygon(xs - lv[0, 0], ys - lv[0, 1], kv)
    return hit


def probe_grid(poly: Polygon, n: int = 50, margin: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    x0, y0, x1, y1 = poly.bbox()
    dx, dy = (x1 - x0) * margin, (y1 - y0) * margin
    gx, gy = np.meshgrid(np.linspace(x0 - dx, x1 + dx, n), np.linspace(y0 - dy, y1 + dy, n))
    return gx.ravel(), gy.ravel()


def probe_agreement(k: Polygon, l: Polygon, result: Polygon, n: int = 50,
                    band: float = 10.0) -> tuple[int, int]:
    """Compare point-in-result against the membership oracle on an n-by-n grid.

    Returns ``(probes checked, disagreements)``; probes within ``band`` times
    the result's geometric tolerance of its boundary are skipped.
    """
    xs, ys = probe_grid(result, n)
    verts = np.asarray([v.as_tuple() for v in result.vertices])
    far = seg.distance_to_ring(xs, ys, verts) > band * result.eps
    inside = seg.points_in_polygon(xs, ys, verts)
    oracle = member_many(k, l, xs, ys)
    return int(far.sum()), int(np.sum(far & (inside != oracle)))
