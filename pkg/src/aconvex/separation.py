"""Angular-region separation witnesses for points outside a polygon.

For a boundary site p with unit tangent tau, let g+ be the smallest rotation
of a boundary arc starting at p and g- the smallest rotation of an arc ending
at p (both <= 0).  The wedge A(p) between the rays

    ray1 = tau rotated by pi - g-      (looking back, bent outward)
    ray2 = tau rotated by g+           (looking ahead, bent outward)

swept counterclockwise from ray1 to ray2 has measure pi + g+ + g- >= pi + aco,
and its interior misses the polygon.  For an exterior point x it is enough to
find a site whose wedge contains x: the wedge translated to apex x is inside
the original one.  Along an edge interior g+ and g- are constant, so the site
where the wedge bisector points straight at x is solved in closed form.  At a
vertex the tangent sweeps the vertex turn and those sites are sampled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import _segments as seg
from .errors import AcoPreconditionViolated, PointInsidePolygon, SearchExhausted
from .geom_core import (
    EPS_ANGLE,
    TWO_PI,
    Polygon,
    Vec2,
    aco_polygon,
    ccw_angle,
    signed_angle,
    skew,
    wrap_angle,
)

TOL_SEP = 1e-6
INITIAL_SAMPLES = 8
MAX_REFINE = 12


@dataclass(frozen=True)
class AngularRegion:
    """Closed convex cone swept counterclockwise from ``ray1_dir`` to ``ray2_dir``."""

    apex: Vec2
    ray1_dir: Vec2
    ray2_dir: Vec2
    measure: float

    def __post_init__(self):
        if not 0.0 < self.measure <= math.pi + EPS_ANGLE:
            raise ValueError(f"angular region measure {self.measure!r} outside (0, pi]")
        sweep = ccw_angle(self.ray1_dir, self.ray2_dir)
        if sweep > TWO_PI - 1e-9:
            sweep -= TWO_PI
        if abs(sweep - self.measure) > 1e-9:
            raise ValueError("ray directions do not span the stated measure")

    @property
    def bisector(self) -> Vec2:
        return self.ray1_dir.rotated(0.5 * self.measure)

    def translated(self, apex: Vec2) -> "AngularRegion":
        return AngularRegion(apex, self.ray1_dir, self.ray2_dir, self.measure)


@dataclass(frozen=True)
class BoundarySite:
    """A point on edge ``edge`` at ``param`` in (0, 1), or, when ``fan`` is set,
    the vertex starting that edge with the tangent a fraction ``fan`` of the
    way through the vertex turn."""

    edge: int
    param: float
    tangent: Vec2
    fan: Optional[float] = None

    def point(self, k: Polygon) -> Vec2:
        v = k.vertices[self.edge]
        if self.fan is not None:
            return v
        return v + k.boundary.shifts[self.edge].vector * self.param


def _turns(k: Polygon) -> np.ndarray:
    """``t[i]`` is the turn at vertex ``i``, from edge ``i-1`` into edge ``i``."""
    sh = k.boundary.shifts
    return np.array([signed_angle(sh[i - 1].direction, sh[i].direction) for i in range(len(sh))])


def _edge_gammas(k: Polygon) -> tuple[np.ndarray, np.ndarray]:
    """Per-edge (g+, g-) for sites in the edge interior."""
    t = _turns(k)
    n = len(t)
    steps = np.arange(n - 1)
    fwd = (np.arange(n)[:, None] + 1 + steps[None, :]) % n
    bwd = (np.arange(n)[:, None] - steps[None, :]) % n
    gp = np.minimum(0.0, np.cumsum(t[fwd], axis=1).min(axis=1))
    gm = np.minimum(0.0, np.cumsum(t[bwd], axis=1).min(axis=1))
    return gp, gm


def edge_site(k: Polygon, edge: int, param: float = 0.5) -> BoundarySite:
    if not 0.0 < param < 1.0:
        raise ValueError("edge sites need a parameter strictly inside (0, 1)")
    return BoundarySite(edge, param, k.boundary.shifts[edge].direction)


def fan_site(k: Polygon, vertex: int, fraction: float) -> BoundarySite:
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fan fraction must lie in [0, 1]")
    sh = k.boundary.shifts
    d_in, d_out = sh[vertex - 1].direction, sh[vertex].direction
    return BoundarySite(vertex, 0.0, d_in.rotated(fraction * signed_angle(d_in, d_out)), fraction)


def _site_gammas(k: Polygon, site: BoundarySite, cache=None) -> tuple[float, float]:
    gp, gm = cache if cache is not None else _edge_gammas(k)
    i = site.edge
    if site.fan is None:
        return float(gp[i]), float(gm[i])
    n = len(gp)
    sh = k.boundary.shifts
    ti = signed_angle(sh[i - 1].direction, sh[i].direction)
    lam = site.fan
    return (min(0.0, (1.0 - lam) * ti + float(gp[i])),
            min(0.0, lam * ti + float(gm[(i - 1) % n])))


def gamma_plus(k: Polygon, site: BoundarySite) -> float:
    """Minimum rotation over boundary arcs starting at ``site``."""
    return _site_gammas(k, site)[0]


def gamma_minus(k: Polygon, site: BoundarySite) -> float:
    """Minimum rotation over boundary arcs ending at ``site``."""
    return _site_gammas(k, site)[1]


def _region(k: Polygon, site: BoundarySite, cache=None) -> AngularRegion:
    gp, gm = _site_gammas(k, site, cache)
    tau = site.tangent
    return AngularRegion(site.point(k), tau.rotated(math.pi - gm), tau.rotated(gp),
                         math.pi + gp + gm)


def build_region(k: Polygon, site: BoundarySite) -> AngularRegion:
    return _region(k, site)


def region_contains(a: AngularRegion, p: Vec2) -> bool:
    z = p - a.apex
    return skew(a.ray1_dir, z) >= 0.0 and skew(z, a.ray2_dir) >= 0.0


def region_disjoint(a: AngularRegion, k: Polygon, tol: Optional[float] = None) -> bool:
    """Whether no edge of ``k`` enters the open region.  Contacts within ``tol``
    of the bounding rays (tangency, apex on the boundary) are allowed."""
    tol = k.eps if tol is None else tol
    o = a.apex
    verts = k.vertices
    n = len(verts)
    for i in range(n):
        p0, p1 = verts[i] - o, verts[(i + 1) % n] - o
        lo, hi = 0.0, 1.0
        for f0, f1 in ((skew(a.ray1_dir, p0), skew(a.ray1_dir, p1)),
                       (skew(p0, a.ray2_dir), skew(p1, a.ray2_dir))):
            # keep s in [0, 1] with f0 + s (f1 - f0) > tol
            if f0 > tol and f1 > tol:
                continue
            if f0 <= tol and f1 <= tol:
                lo, hi = 1.0, 0.0
                break
            s = (tol - f0) / (f1 - f0)
            if f0 > tol:
                hi = min(hi, s)
            else:
                lo = max(lo, s)
        if lo < hi:
            return False
    return True


def _outside(k: Polygon, x: Vec2) -> None:
    verts = np.asarray([v.as_tuple() for v in k.vertices])
    px, py = np.array([x.x]), np.array([x.y])
    if seg.distance_to_ring(px, py, verts)[0] <= k.eps:
        raise PointInsidePolygon(f"point ({x.x:.12g}, {x.y:.12g}) is on the boundary")
    if seg.points_in_polygon(px, py, verts)[0]:
        raise PointInsidePolygon(f"point ({x.x:.12g}, {x.y:.12g}) is inside the polygon")


def _margin(a: AngularRegion, x: Vec2) -> float:
    """Angular depth of ``x`` inside the region at its own apex; negative outside."""
    z = x - a.apex
    if z.norm() == 0.0:
        return -math.inf
    off = abs(wrap_angle(z.angle() - a.bisector.angle()))
    return 0.5 * a.measure - off


def _edge_candidates(k: Polygon, x: Vec2, cache) -> Iterator[BoundarySite]:
    """Edge-interior sites where the wedge bisector points at ``x``."""
    verts = k.vertices
    for i, s in enumerate(k.boundary.shifts):
        nu = _region(k, edge_site(k, i), cache).bisector
        den = skew(nu, s.vector)
        if den == 0.0:
            continue
        t = skew(nu, x - verts[i]) / den
        if 0.0 < t < 1.0:
            yield edge_site(k, i, t)


def _fan_candidates(k: Polygon, m: int) -> Iterator[BoundarySite]:
    for v in range(len(k.vertices)):
        for j in range(m + 1):
            yield fan_site(k, v, j / m)


def separate(k: Polygon, x: Vec2) -> AngularRegion:
    """An angular region with apex ``x``, measure >= pi + aco(k), missing ``k``."""
    a = aco_polygon(k).value
    if a <= -math.pi + EPS_ANGLE:
        raise AcoPreconditionViolated(f"aco = {a:.12g} <= -pi")
    _outside(k, x)
    cache = _edge_gammas(k)
    need = math.pi + a - TOL_SEP

    def verified(sites) -> Optional[AngularRegion]:
        scored = []
        for site in sites:
            r = _region(k, site, cache)
            mg = _margin(r, x)
            if mg >= 0.0:
                scored.append((-mg / r.measure, site.edge, site.param, site.fan or 0.0, r))
        for *_, r in sorted(scored, key=lambda e: e[:4]):
            w = r.translated(x)
            if w.measure >= need and region_disjoint(w, k):
                return w
        return None

    found = verified(_edge_candidates(k, x, cache))
    if found is not None:
        return found
    m = INITIAL_SAMPLES
    for _ in range(MAX_REFINE):
        found = verified(_fan_candidates(k, m))
        if found is not None:
            return found
        m *= 2
    raise SearchExhausted(f"no verified witness after {MAX_REFINE} refinements")


def boundary_sites(k: Polygon, per_edge: int = 8, per_fan: int = 8) -> list[BoundarySite]:
    """One counterclockwise traversal: each vertex fan, then samples along the edge."""
    out = []
    for i in range(len(k.vertices)):
        out.extend(fan_site(k, i, j / per_fan) for j in range(per_fan + 1))
        out.extend(edge_site(k, i, (j + 1) / (per_edge + 1)) for j in range(per_edge))
    return out


def _wrapped_total(angles: list[float]) -> float:
    return math.fsum(wrap_angle(b - a) for a, b in zip(angles, angles[1:] + angles[:1]))


def bisector_rotation(k: Polygon, per_edge: int = 8, per_fan: int = 8) -> float:
    """Total turning of the wedge bisector over one traversal (expected 2 pi)."""
    cache = _edge_gammas(k)
    return _wrapped_total([_region(k, s, cache).bisector.angle()
                           for s in boundary_sites(k, per_edge, per_fan)])


def direction_rotation(k: Polygon, x: Vec2, per_edge: int = 8) -> float:
    """Total turning of the direction from the boundary to ``x`` (expected 0 outside)."""
    return _wrapped_total([(x - s.point(k)).angle() for s in boundary_sites(k, per_edge, 1)])
