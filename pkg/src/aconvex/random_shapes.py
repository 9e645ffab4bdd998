"""Seeded random polygons and polylines for property tests and experiments.

Families: perturbed stars (star-shaped about the origin, so always simple),
rectilinear histograms (one or two stepped profiles over a row of columns),
and convex hulls of random points.
"""
from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from .errors import GeometryError
from .geom_core import (
    EPS_ANGLE,
    Polygon,
    Polyline,
    Vec2,
    aco_open,
    aco_polygon,
    is_simple,
    merge_collinear,
    orient_ccw,
)


def _similarity(rng: np.random.Generator, pts: list[tuple[float, float]], scale=(0.5, 3.0)):
    ang = rng.uniform(0, 2 * math.pi)
    s = rng.uniform(*scale)
    tx, ty = rng.uniform(-5, 5, 2)
    c, sn = math.cos(ang), math.sin(ang)
    return [(s * (c * x - sn * y) + tx, s * (sn * x + c * y) + ty) for x, y in pts]


def random_star(rng: np.random.Generator, n: int, r_min: float = 0.3, jitter: float = 0.4,
                transform: bool = True) -> Polygon:
    idx = np.arange(n) + rng.uniform(-jitter, jitter, n)
    theta = 2 * math.pi * idx / n
    r = rng.uniform(r_min, 1.0, n)
    pts = [(float(a * math.cos(t)), float(a * math.sin(t))) for a, t in zip(r, theta)]
    if transform:
        pts = _similarity(rng, pts)
    return orient_ccw(pts)


def random_histogram(rng: np.random.Generator, ncols: int, two_sided: bool = True,
                     transform: bool = False) -> Polygon:
    """Rectilinear polygon over ``ncols`` columns with random top (and bottom)
    heights.  Coordinates are random floats, so sums avoid structural ties."""
    widths = rng.uniform(0.5, 1.5, ncols)
    xs = np.concatenate([[0.0], np.cumsum(widths)])
    top = rng.uniform(0.5, 3.0, ncols)
    bot = -rng.uniform(0.0, 1.5, ncols) if two_sided else np.zeros(ncols)
    pts = []
    for i in range(ncols):
        pts.append((xs[i], bot[i]))
        pts.append((xs[i + 1], bot[i]))
    for i in range(ncols - 1, -1, -1):
        pts.append((xs[i + 1], top[i]))
        pts.append((xs[i], top[i]))
    pts = [(float(x), float(y)) for x, y in pts]
    if transform:
        quarter = int(rng.integers(0, 4))
        for _ in range(quarter):
            pts = [(-y, x) for x, y in pts]
        tx, ty = rng.uniform(-5, 5, 2)
        pts = [(x + tx, y + ty) for x, y in pts]
    dedup = []
    for p in pts:
        if not dedup or math.dist(p, dedup[-1]) > 1e-12:
            dedup.append(p)
    if math.dist(dedup[0], dedup[-1]) <= 1e-12:
        dedup.pop()
    ring = merge_collinear([Vec2(*p) for p in dedup])
    return orient_ccw(ring)


def convex_hull(points) -> list[tuple[float, float]]:
    """Andrew's monotone chain; collinear points dropped, CCW order."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def random_convex(rng: np.random.Generator, npts: int) -> Polygon:
    while True:
        pts = rng.normal(size=(npts, 2)) * rng.uniform(0.5, 2.0) + rng.uniform(-5, 5, 2)
        hull = convex_hull(pts.tolist())
        if len(hull) >= 3:
            return Polygon.from_points(hull)


def random_polygon(rng: np.random.Generator, n_max: int = 32) -> Polygon:
    """A polygon from a randomly chosen family, with any aco."""
    kind = rng.integers(0, 3)
    if kind == 0:
        return random_star(rng, int(rng.integers(3, n_max + 1)))
    if kind == 1:
        return random_histogram(rng, int(rng.integers(1, max(2, n_max // 4) + 1)),
                                two_sided=bool(rng.integers(0, 2)), transform=True)
    return random_convex(rng, int(rng.integers(3, n_max + 1)))


def random_certified(rng: np.random.Generator, n_max: int = 32,
                     accept: Optional[Callable[[Polygon], bool]] = None) -> Polygon:
    """Rejection-sample a polygon with aco > -pi."""
    for _ in range(10_000):
        k = random_polygon(rng, n_max)
        if aco_polygon(k).value > -math.pi + EPS_ANGLE and (accept is None or accept(k)):
            return k
    raise RuntimeError("rejection sampling failed")


def random_reflex(rng: np.random.Generator, n_max: int = 32) -> Polygon:
    """A star or histogram polygon with at least one reflex vertex."""
    from .geom_core import turn_is_reflex

    for _ in range(10_000):
        if rng.integers(0, 2):
            k = random_star(rng, int(rng.integers(4, n_max + 1)))
        else:
            k = random_histogram(rng, int(rng.integers(2, max(3, n_max // 4) + 1)), transform=True)
        if any(turn_is_reflex(k)):
            return k
    raise RuntimeError("rejection sampling failed")


def _chain_from_turns(start: Vec2, heading: float, turns, lengths) -> Polyline:
    pts = [start]
    h = heading
    for k, ln in enumerate(lengths):
        pts.append(pts[-1] + Vec2.polar(h, ln))
        if k < len(turns):
            h += turns[k]
    return Polyline.from_points(pts)


def random_chain_pair(rng: np.random.Generator, n_max: int = 12) -> tuple[Polyline, Polyline]:
    """Two open chains with a common start direction, equal rotation and aco > -pi."""
    heading = rng.uniform(0, 2 * math.pi)
    for _ in range(10_000):
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, n_max + 1))
        tp = rng.uniform(-1.3, 1.5, n - 1)
        total = float(np.sum(tp))
        if m == 1:
            if abs(total) > 1e-12:
                continue
            tq = np.zeros(0)
        else:
            tq = rng.uniform(-1.3, 1.5, m - 1)
            tq[-1] = total - float(np.sum(tq[:-1]))
            if abs(tq[-1]) > math.pi - 0.05:
                continue
        p = _chain_from_turns(Vec2(*rng.uniform(-3, 3, 2)), heading, tp, rng.uniform(0.2, 2.0, n))
        q = _chain_from_turns(Vec2(*rng.uniform(-3, 3, 2)), heading, tq, rng.uniform(0.2, 2.0, m))
        try:
            if aco_open(p).value > -math.pi + 0.05 and aco_open(q).value > -math.pi + 0.05:
                return p, q
        except GeometryError:
            continue
    raise RuntimeError("rejection sampling failed")


def random_looping_chain(rng: np.random.Generator, n_max: int = 16) -> Polyline:
    """An open chain with aco > -pi that crosses itself."""
    for _ in range(10_000):
        n = int(rng.integers(5, n_max + 1))
        turns = rng.uniform(-0.6, 1.8, n - 1)
        p = _chain_from_turns(Vec2(*rng.uniform(-3, 3, 2)), rng.uniform(0, 2 * math.pi),
                              turns, rng.uniform(0.3, 2.0, n))
        try:
            if aco_open(p).value > -math.pi + 0.05 and not is_simple(p):
                return p
        except GeometryError:
            continue
    raise RuntimeError("rejection sampling failed")
