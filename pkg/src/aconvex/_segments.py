"""Float segment predicates on raw ``(x, y)`` tuples.

All tests take an absolute tolerance ``tol`` (a distance); orientation values
within ``tol * |segment|`` of zero are treated as collinear.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Optional, Sequence

import numpy as np

Point = tuple[float, float]


class Hit(NamedTuple):
    """Intersection of segment ``a`` (param ``t``) with segment ``b`` (param ``u``)."""

    kind: str  # "point" or "overlap"
    t: float
    u: float
    x: float
    y: float
    t_end: float = 0.0  # overlap only
    u_end: float = 0.0


def orient(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _sign(v: float, tol: float) -> int:
    if v > tol:
        return 1
    if v < -tol:
        return -1
    return 0


def _project(a: Point, b: Point, c: Point) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    return ((c[0] - a[0]) * dx + (c[1] - a[1]) * dy) / (dx * dx + dy * dy)


def _clip01(v: float) -> float:
    return 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)


def intersect(a0: Point, a1: Point, b0: Point, b1: Point, tol: float) -> Optional[Hit]:
    la = math.hypot(a1[0] - a0[0], a1[1] - a0[1])
    lb = math.hypot(b1[0] - b0[0], b1[1] - b0[1])
    o1 = _sign(orient(a0, a1, b0), tol * la)
    o2 = _sign(orient(a0, a1, b1), tol * la)
    o3 = _sign(orient(b0, b1, a0), tol * lb)
    o4 = _sign(orient(b0, b1, a1), tol * lb)

    if o1 == 0 and o2 == 0:
        s0 = _project(a0, a1, b0)
        s1 = _project(a0, a1, b1)
        lo, hi = max(0.0, min(s0, s1)), min(1.0, max(s0, s1))
        if (hi - lo) * la < -tol:
            return None
        if (hi - lo) * la <= tol:
            t = _clip01(0.5 * (lo + hi))
            x, y = a0[0] + t * (a1[0] - a0[0]), a0[1] + t * (a1[1] - a0[1])
            return Hit("point", t, _clip01(_project(b0, b1, (x, y))), x, y)
        xl, yl = a0[0] + lo * (a1[0] - a0[0]), a0[1] + lo * (a1[1] - a0[1])
        xh, yh = a0[0] + hi * (a1[0] - a0[0]), a0[1] + hi * (a1[1] - a0[1])
        return Hit("overlap", lo, _clip01(_project(b0, b1, (xl, yl))), xl, yl,
                   hi, _clip01(_project(b0, b1, (xh, yh))))

    if o1 * o2 < 0 and o3 * o4 < 0:
        dx1, dy1 = a1[0] - a0[0], a1[1] - a0[1]
        dx2, dy2 = b1[0] - b0[0], b1[1] - b0[1]
        ex, ey = b0[0] - a0[0], b0[1] - a0[1]
        den = dx1 * dy2 - dy1 * dx2
        t = _clip01((ex * dy2 - ey * dx2) / den)
        u = _clip01((ex * dy1 - ey * dx1) / den)
        return Hit("point", t, u, a0[0] + t * dx1, a0[1] + t * dy1)

    # touching: some endpoint lies on the other segment
    slack_a = tol / la
    slack_b = tol / lb
    for sign, p, on_a in ((o1, b0, True), (o2, b1, True), (o3, a0, False), (o4, a1, False)):
        if sign != 0:
            continue
        if on_a:
            t = _project(a0, a1, p)
            if -slack_a <= t <= 1 + slack_a:
                u = 0.0 if p is b0 else 1.0
                return Hit("point", _clip01(t), u, p[0], p[1])
        else:
            u = _project(b0, b1, p)
            if -slack_b <= u <= 1 + slack_b:
                t = 0.0 if p is a0 else 1.0
                return Hit("point", t, _clip01(u), p[0], p[1])
    return None


def candidate_pairs(pts: Sequence[Point], tol: float) -> list[tuple[int, int]]:
    """Edge pairs ``i < j`` of the chain ``pts`` whose bounding boxes overlap."""
    arr = np.asarray(pts, dtype=float)
    if len(arr) < 3:
        return []
    a, b = arr[:-1], arr[1:]
    lo = np.minimum(a, b) - tol
    hi = np.maximum(a, b) + tol
    ov = ((lo[:, None, 0] <= hi[None, :, 0]) & (lo[None, :, 0] <= hi[:, None, 0])
          & (lo[:, None, 1] <= hi[None, :, 1]) & (lo[None, :, 1] <= hi[:, None, 1]))
    ii, jj = np.nonzero(np.triu(ov, k=1))
    return list(zip(ii.tolist(), jj.tolist()))


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    t = _clip01(_project(a, b, p))
    return math.hypot(p[0] - a[0] - t * (b[0] - a[0]), p[1] - a[1] - t * (b[1] - a[1]))


def points_in_polygon(px: np.ndarray, py: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Even-odd containment of many points in one closed ring (no repeated vertex)."""
    inside = np.zeros(px.shape, dtype=bool)
    x0, y0 = verts[:, 0], verts[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    for xa, ya, xb, yb in zip(x0, y0, x1, y1):
        if ya == yb:
            continue
        crosses = (ya > py) != (yb > py)
        xint = xa + (py - ya) * (xb - xa) / (yb - ya)
        inside ^= crosses & (px < xint)
    return inside


def distance_to_ring(px: np.ndarray, py: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Distance of many points to the boundary of a closed ring."""
    best = np.full(px.shape, np.inf)
    x0, y0 = verts[:, 0], verts[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    for xa, ya, xb, yb in zip(x0, y0, x1, y1):
        dx, dy = xb - xa, yb - ya
        den = dx * dx + dy * dy
        t = np.clip(((px - xa) * dx + (py - ya) * dy) / den, 0.0, 1.0)
        best = np.minimum(best, np.hypot(px - xa - t * dx, py - ya - t * dy))
    return best
