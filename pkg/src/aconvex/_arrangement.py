"""Outer face of a planar segment set.

Segments are split at every mutual contact (crossings, T-junctions and
collinear overlaps), endpoints closer than ``tol`` are merged, and the
boundary of the unbounded face is walked counterclockwise by always taking
the sharpest right turn.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import _segments as seg
from .errors import InternalInconsistency

Point = tuple[float, float]
Segment = tuple[Point, Point]


def _overlapping_boxes(segs: Sequence[Segment], tol: float) -> list[tuple[int, int]]:
    arr = np.asarray(segs, dtype=float)
    lo = np.minimum(arr[:, 0], arr[:, 1]) - tol
    hi = np.maximum(arr[:, 0], arr[:, 1]) + tol
    ov = ((lo[:, None, 0] <= hi[None, :, 0]) & (lo[None, :, 0] <= hi[:, None, 0])
          & (lo[:, None, 1] <= hi[None, :, 1]) & (lo[None, :, 1] <= hi[:, None, 1]))
    ii, jj = np.nonzero(np.triu(ov, k=1))
    return list(zip(ii.tolist(), jj.tolist()))


class _Snap:
    """Merge points closer than ``tol``; the first point of a cluster wins."""

    def __init__(self, tol: float):
        self.tol = tol
        self.cell = 4.0 * tol
        self.grid: dict[tuple[int, int], list[int]] = {}
        self.points: list[Point] = []

    def add(self, p: Point) -> int:
        cx, cy = int(math.floor(p[0] / self.cell)), int(math.floor(p[1] / self.cell))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for idx in self.grid.get((cx + dx, cy + dy), ()):
                    if math.dist(self.points[idx], p) <= self.tol:
                        return idx
        self.points.append(p)
        self.grid.setdefault((cx, cy), []).append(len(self.points) - 1)
        return len(self.points) - 1


def planar_graph(segs: Sequence[Segment], tol: float) -> tuple[list[Point], dict[int, set[int]]]:
    segs = [s for s in segs if math.dist(s[0], s[1]) > tol]
    splits: list[list[float]] = [[0.0, 1.0] for _ in segs]
    for i, j in _overlapping_boxes(segs, tol):
        hit = seg.intersect(segs[i][0], segs[i][1], segs[j][0], segs[j][1], tol)
        if hit is None:
            continue
        splits[i].append(hit.t)
        splits[j].append(hit.u)
        if hit.kind == "overlap":
            splits[i].append(hit.t_end)
            splits[j].append(hit.u_end)
    snap = _Snap(tol)
    for a, b in segs:  # exact endpoints take priority as cluster representatives
        snap.add(a)
        snap.add(b)
    adj: dict[int, set[int]] = {}
    for (a, b), ts in zip(segs, splits):
        ids = []
        for t in sorted(set(ts)):
            if t == 0.0:
                p = a
            elif t == 1.0:
                p = b
            else:
                p = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            k = snap.add(p)
            if not ids or ids[-1] != k:
                ids.append(k)
        for u, v in zip(ids, ids[1:]):
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
    return snap.points, adj


def outer_boundary(segs: Sequence[Segment], tol: float) -> list[Point]:
    """Counterclockwise vertex cycle of the outer face of ``segs``."""
    pts, adj = planar_graph(segs, tol)
    if not adj:
        raise InternalInconsistency("empty segment set")
    start = min(adj, key=lambda k: (pts[k][1], pts[k][0]))

    def heading(u: int, v: int) -> float:
        return math.atan2(pts[v][1] - pts[u][1], pts[v][0] - pts[u][0])

    first = min(adj[start], key=lambda v: heading(start, v) % (2 * math.pi))
    ring = [start]
    prev, cur = start, first
    limit = 2 * sum(len(v) for v in adj.values()) + 2
    while not (prev == start and cur == first and len(ring) > 1):
        ring.append(cur)
        back = heading(cur, prev)

        def turn(v: int) -> float:
            a = (heading(cur, v) - back) % (2 * math.pi)
            return a if a > 0.0 else 2 * math.pi

        prev, cur = cur, min(adj[cur], key=turn)
        if len(ring) > limit:
            raise InternalInconsistency("outer face walk does not close")
    ring.pop()  # the walk re-entered the start node
    return [pts[k] for k in ring]
