"""Plane primitives: vectors, shift sequences, rotation and angular convexity.

A polyline is stored as a start point plus a sequence of shifts (direction and
length).  Zero-length shifts are allowed only when flagged virtual; they carry
a direction, take part in the turn sequence and have no geometric extent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from . import _segments as seg
from .errors import (
    DegenerateArea,
    InvalidPolyline,
    NotCCW,
    NotSimple,
    OppositeVectors,
    ZeroVector,
)

EPS_ANGLE = 1e-9
EPS_UNIT = 1e-12
# geometric tolerance is EPS_REL times the bounding-box diameter
EPS_REL = 1e-9
# aco windows whose sums differ by less than this are ties
TIE_EPS = 1e-10
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, slots=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self):
        if type(self.x) is not float or type(self.y) is not float:
            object.__setattr__(self, "x", float(self.x))
            object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> Vec2:
        return Vec2(self.x / k, self.y / k)

    def __neg__(self) -> Vec2:
        return Vec2(-self.x, -self.y)

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def unit(self) -> Vec2:
        n = self.norm()
        if n == 0.0:
            raise ZeroVector("cannot normalise the zero vector")
        return Vec2(self.x / n, self.y / n)

    def rotated(self, angle: float) -> Vec2:
        c, s = math.cos(angle), math.sin(angle)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    @staticmethod
    def polar(angle: float, r: float = 1.0) -> Vec2:
        return Vec2(r * math.cos(angle), r * math.sin(angle))


def skew(v: Vec2, w: Vec2) -> float:
    """The skew (cross) product ``v.x*w.y - v.y*w.x``."""
    return v.x * w.y - v.y * w.x


def is_opposite(v: Vec2, w: Vec2) -> bool:
    return v.dot(w) < 0 and abs(skew(v, w)) <= EPS_ANGLE * v.norm() * w.norm()


def signed_angle(v: Vec2, w: Vec2) -> float:
    """Signed angle from ``v`` to ``w`` in (-pi, pi), positive when turning left.

    Raises ZeroVector for a zero argument and OppositeVectors when the two
    directions are opposite (the angle sign is then undefined).
    """
    if (v.x == 0.0 and v.y == 0.0) or (w.x == 0.0 and w.y == 0.0):
        raise ZeroVector("signed angle of a zero vector")
    if is_opposite(v, w):
        raise OppositeVectors(f"opposite vectors {v} and {w}")
    return math.atan2(skew(v, w), v.dot(w))


def ccw_angle(v: Vec2, w: Vec2) -> float:
    """Counterclockwise angle from ``v`` to ``w`` in [0, 2*pi)."""
    a = math.atan2(skew(v, w), v.dot(w))
    return a + TWO_PI if a < 0 else a


def wrap_angle(a: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    a = math.fmod(a + math.pi, TWO_PI)
    if a <= 0:
        a += TWO_PI
    return a - math.pi


def geom_eps(points: Iterable[Vec2 | tuple[float, float]]) -> float:
    xs, ys = [], []
    for p in points:
        xs.append(p[0] if isinstance(p, tuple) else p.x)
        ys.append(p[1] if isinstance(p, tuple) else p.y)
    if not xs:
        return EPS_REL
    diam = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    return EPS_REL * max(diam, 1e-300)


@dataclass(frozen=True, slots=True)
class Shift:
    direction: Vec2
    length: float
    virtual: bool = False
    vector: Optional[Vec2] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if abs(self.direction.norm() - 1.0) > EPS_UNIT * 10:
            raise InvalidPolyline(f"shift direction {self.direction} is not a unit vector")
        if not math.isfinite(self.length) or self.length < 0:
            raise InvalidPolyline(f"bad shift length {self.length}")
        if self.length == 0 and not self.virtual:
            raise InvalidPolyline("zero-length shift must be flagged virtual")
        if self.virtual and self.length != 0:
            raise InvalidPolyline("virtual shifts have zero length")
        if self.vector is None:
            object.__setattr__(self, "vector", self.direction * self.length)

    @classmethod
    def of(cls, v: Vec2) -> Shift:
        n = v.norm()
        if n == 0.0:
            raise ZeroVector("a real shift needs a nonzero vector")
        return cls(Vec2(v.x / n, v.y / n), n, False, v)

    @classmethod
    def virtual_edge(cls, direction: Vec2) -> Shift:
        return cls(direction.unit(), 0.0, True)


@dataclass(frozen=True)
class Polyline:
    start: Vec2
    shifts: tuple[Shift, ...]
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(self.shifts))
        if not self.shifts:
            raise InvalidPolyline("a polyline needs at least one shift")
        n = len(self.shifts)
        pairs = range(n if self.closed else n - 1)
        for i in pairs:
            a = self.shifts[i].direction
            b = self.shifts[(i + 1) % n].direction
            if is_opposite(a, b):
                raise OppositeVectors(f"shifts {i} and {(i + 1) % n} are opposite")
        if self.closed:
            gap = math.hypot(math.fsum(s.vector.x for s in self.shifts),
                             math.fsum(s.vector.y for s in self.shifts))
            if gap > 10 * geom_eps(self.vertices):
                raise InvalidPolyline("closed polyline does not close up")

    @classmethod
    def from_points(cls, points: Sequence[Vec2 | tuple[float, float]], closed: bool = False) -> Polyline:
        """Build from vertices; for a closed chain the first vertex is not repeated."""
        pts = [p if isinstance(p, Vec2) else Vec2(*p) for p in points]
        if closed and len(pts) > 1 and pts[0] == pts[-1]:
            pts = pts[:-1]
        if closed:
            pts = pts + [pts[0]]
        if len(pts) < 2:
            raise InvalidPolyline("a polyline needs at least two vertices")
        shifts = []
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise InvalidPolyline(f"consecutive vertices coincide at {a}")
            shifts.append(Shift.of(b - a))
        line = cls(pts[0], tuple(shifts), closed)
        # keep the caller's coordinates rather than prefix sums
        line.__dict__["vertices"] = tuple(pts)
        return line

    @cached_property
    def vertices(self) -> tuple[Vec2, ...]:
        """All vertices by prefix sums, one per shift plus the start."""
        out = [self.start]
        x, y = self.start.x, self.start.y
        for s in self.shifts:
            x += s.vector.x
            y += s.vector.y
            out.append(Vec2(x, y))
        if self.closed:
            out[-1] = self.start
        return tuple(out)

    @cached_property
    def geometric_points(self) -> tuple[tuple[float, float], ...]:
        """Vertex coordinates with virtual shifts collapsed."""
        verts = self.vertices
        out = [verts[0].as_tuple()]
        for s, v in zip(self.shifts, verts[1:]):
            if not s.virtual:
                out.append(v.as_tuple())
        return tuple(out)

    @property
    def end(self) -> Vec2:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.shifts)

    @cached_property
    def length(self) -> float:
        return math.fsum(s.length for s in self.shifts)

    @cached_property
    def eps(self) -> float:
        return geom_eps(self.geometric_points)

    def turn_angles(self) -> list[float]:
        """Signed turns between consecutive shifts (cyclic when closed)."""
        n = len(self.shifts)
        m = n if self.closed else n - 1
        return [signed_angle(self.shifts[i].direction, self.shifts[(i + 1) % n].direction)
                for i in range(m)]

    def point_at(self, t: float) -> Vec2:
        """Point at normalised arc-length parameter ``t`` in [0, 1]."""
        target = min(max(t, 0.0), 1.0) * self.length
        acc = 0.0
        verts = self.vertices
        for i, s in enumerate(self.shifts):
            if s.virtual:
                continue
            if acc + s.length >= target:
                return verts[i] + s.direction * (target - acc)
            acc += s.length
        return verts[-1]

    def without_virtual(self) -> Polyline:
        return Polyline(self.start, tuple(s for s in self.shifts if not s.virtual), self.closed)

    def reversed(self) -> Polyline:
        shifts = tuple(Shift(-s.direction, s.length, s.virtual, -s.vector) for s in reversed(self.shifts))
        return Polyline(self.end, shifts, self.closed)


def rot(p: Polyline) -> float:
    """Rotation: the sum of signed turns along the shift sequence."""
    return math.fsum(p.turn_angles())


@dataclass(frozen=True)
class AcoReport:
    """Angular convexity value and the arc of shifts attaining it.

    The witness arc runs from shift ``witness_start`` to shift ``witness_end``
    inclusive (cyclically for polygons).
    """

    value: float
    witness_start: int
    witness_end: int

    @property
    def convex(self) -> bool:
        return self.value == 0.0


def _pick_window(turns: list[float], prefix: list[float], n_starts: int, max_len: int,
                 threshold: float, cyclic: bool) -> tuple[float, int, int]:
    n = len(turns)
    for length in range(0, max_len + 1):
        for i in range(n_starts):
            if not cyclic and i + length > n:
                break
            if prefix[i + length] - prefix[i] <= threshold:
                window = [turns[(i + k) % n] for k in range(length)] if n else []
                return math.fsum(window), i, length
    raise AssertionError("no aco window found")  # pragma: no cover


def _report(value: float, start: int, length: int, n_shifts: int, cyclic: bool) -> AcoReport:
    end = (start + length) % n_shifts if cyclic else start + length
    return AcoReport(min(value, 0.0), start, end)


def _min_window_sum(prefix: list[float], n_starts: int, max_len: int) -> float:
    """min over windows of ``prefix[j] - prefix[i]`` with ``i < n_starts`` and
    ``0 <= j - i <= max_len``, by a sliding-window maximum over ``prefix[i]``."""
    from collections import deque

    best = 0.0
    dq: deque[int] = deque()
    nxt = 0
    for j in range(len(prefix)):
        while nxt <= j and nxt < n_starts:
            while dq and prefix[dq[-1]] <= prefix[nxt]:
                dq.pop()
            dq.append(nxt)
            nxt += 1
        while dq and dq[0] < j - max_len:
            dq.popleft()
        if dq:
            best = min(best, prefix[j] - prefix[dq[0]])
    return best


def _prefix(turns: list[float], copies: int) -> list[float]:
    prefix = [0.0]
    for _ in range(copies):
        for a in turns:
            prefix.append(prefix[-1] + a)
    return prefix


def aco_open(p: Polyline) -> AcoReport:
    """Angular convexity of an open polyline: the minimum rotation over all
    contiguous sub-chains, 0 for a single edge."""
    turns = p.turn_angles() if not p.closed else p.turn_angles()[:-1]
    n = len(turns)
    prefix = _prefix(turns, 1)
    best = _min_window_sum(prefix, n + 1, n)
    value, start, length = _pick_window(turns, prefix, n + 1, n, best + TIE_EPS, cyclic=False)
    return _report(value, start, length, len(p.shifts), cyclic=False)


def aco_polygon(k: Polygon) -> AcoReport:
    """Angular convexity of a simple polygon: the minimum rotation over all
    boundary arcs, found by a cyclic minimum-window scan of the turn angles."""
    turns = k.boundary.turn_angles()
    n = len(turns)
    prefix = _prefix(turns, 2)
    best = _min_window_sum(prefix, n, n)
    value, start, length = _pick_window(turns, prefix, n, n, best + TIE_EPS, cyclic=True)
    return _report(value, start, length, n, cyclic=True)


def aco(obj: Polyline | Polygon) -> AcoReport:
    return aco_polygon(obj) if isinstance(obj, Polygon) else aco_open(obj)


def aco_bruteforce(obj: Polyline | Polygon) -> AcoReport:
    """Reference aco: enumerate every arc and sum its turns directly."""
    cyclic = isinstance(obj, Polygon)
    line = obj.boundary if cyclic else obj
    turns = line.turn_angles()
    if not cyclic and line.closed:
        turns = turns[:-1]
    n = len(turns)
    n_starts = n if cyclic else n + 1
    sums = {}
    for i in range(n_starts):
        for length in range(0, n + 1):
            if not cyclic and i + length > n:
                break
            sums[(i, length)] = math.fsum(turns[(i + k) % n] for k in range(length))
    best = min(sums.values())
    start, length = min(((i, ln) for (i, ln), v in sums.items() if v <= best + TIE_EPS),
                        key=lambda w: (w[1], w[0]))
    return _report(sums[(start, length)], start, length, len(line.shifts), cyclic)


def witness_rotation(obj: Polyline | Polygon, report: AcoReport) -> float:
    """Rotation of the witness arc, recomputed from the shift directions."""
    line = obj.boundary if isinstance(obj, Polygon) else obj
    n = len(line.shifts)
    i = report.witness_start
    idx = [i]
    while idx[-1] != report.witness_end:
        idx.append((idx[-1] + 1) % n)
    dirs = [line.shifts[j].direction for j in idx]
    return math.fsum(signed_angle(a, b) for a, b in zip(dirs, dirs[1:]))


def area_tolerance(eps: float) -> float:
    # eps * diameter, i.e. EPS_REL * diameter**2
    return eps * eps / EPS_REL


def signed_area(points: Sequence[Vec2 | tuple[float, float]]) -> float:
    pts = [tuple(p) for p in points]
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts = pts[:-1]
    acc = []
    for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
        acc.append(x0 * y1 - x1 * y0)
    return 0.5 * math.fsum(acc)


def self_intersections(p: Polyline) -> list[tuple[float, float]]:
    """Parameter pairs ``(t1, t2)``, ``t1 < t2`` in normalised arc length, where
    the polyline meets itself other than at the shared vertex of consecutive
    edges.  Overlaps are reported by their first common point."""
    pts = p.geometric_points
    m = len(pts) - 1
    if m < 2:
        return []
    tol = p.eps
    cum = [0.0]
    for a, b in zip(pts, pts[1:]):
        cum.append(cum[-1] + math.hypot(b[0] - a[0], b[1] - a[1]))
    total = cum[-1]
    out = []
    for i, j in seg.candidate_pairs(pts, tol):
        adjacent = j == i + 1 or (p.closed and i == 0 and j == m - 1)
        hit = seg.intersect(pts[i], pts[i + 1], pts[j], pts[j + 1], tol)
        if hit is None:
            continue
        if adjacent and hit.kind == "point":
            continue
        t1 = (cum[i] + hit.t * (cum[i + 1] - cum[i])) / total
        t2 = (cum[j] + hit.u * (cum[j + 1] - cum[j])) / total
        out.append((min(t1, t2), max(t1, t2)))
    out.sort()
    return out


def is_simple(p: Polyline) -> bool:
    return not self_intersections(p)


@dataclass(frozen=True)
class Polygon:
    """A simple polygon whose boundary is closed, simple and counterclockwise."""

    boundary: Polyline

    def __post_init__(self):
        b = self.boundary
        if not b.closed:
            raise InvalidPolyline("polygon boundary must be closed")
        if any(s.virtual for s in b.shifts):
            raise InvalidPolyline("polygon boundary may not contain virtual edges")
        if len(b.shifts) < 3:
            raise DegenerateArea("a polygon needs at least three edges")
        if not is_simple(b):
            raise NotSimple("polygon boundary self-intersects")
        area = signed_area(self.vertices)
        if abs(area) <= area_tolerance(b.eps):
            raise DegenerateArea(f"polygon area {area} is degenerate")
        if area < 0:
            raise NotCCW("polygon boundary is clockwise")
        r = rot(b)
        if abs(r - TWO_PI) > 1e-6:
            raise NotCCW(f"boundary rotation {r} is not 2*pi")

    @classmethod
    def from_points(cls, points: Sequence[Vec2 | tuple[float, float]]) -> Polygon:
        return cls(Polyline.from_points(points, closed=True))

    @property
    def vertices(self) -> tuple[Vec2, ...]:
        return self.boundary.vertices[:-1]

    def __len__(self) -> int:
        return len(self.boundary.shifts)

    @property
    def eps(self) -> float:
        return self.boundary.eps

    def translated(self, t: Vec2) -> Polygon:
        return Polygon(Polyline(self.boundary.start + t, self.boundary.shifts, True))

    def bbox(self) -> tuple[float, float, float, float]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)


def orient_ccw(points: Sequence[Vec2 | tuple[float, float]]) -> Polygon:
    """Polygon from a raw closed vertex list, reversed if it runs clockwise."""
    pts = [p if isinstance(p, Vec2) else Vec2(*p) for p in points]
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts = pts[:-1]
    if len(pts) < 3:
        raise DegenerateArea("fewer than three vertices")
    area = signed_area(pts)
    try:
        line = Polyline.from_points(pts, closed=True)
    except OppositeVectors:
        if abs(area) <= area_tolerance(geom_eps(pts)):
            raise DegenerateArea(f"polygon area {area} is degenerate") from None
        raise NotSimple("boundary doubles back on itself") from None
    if not is_simple(line):
        raise NotSimple("vertex list self-intersects")
    if abs(area) <= area_tolerance(line.eps):
        raise DegenerateArea(f"polygon area {area} is degenerate")
    if area < 0:
        pts = pts[::-1]
    return Polygon.from_points(pts)


def turn_is_reflex(k: Polygon) -> list[bool]:
    """Per-vertex reflex flags from the orientation predicate alone (vertex i+1
    sits between shifts i and i+1)."""
    verts = list(k.vertices)
    n = len(verts)
    out = []
    for i in range(n):
        a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
        out.append(seg.orient(a.as_tuple(), b.as_tuple(), c.as_tuple()) < -k.eps * (c - b).norm())
    return out


def merge_collinear(points: Sequence[Vec2]) -> list[Vec2]:
    """Drop vertices of a closed ring whose neighbouring edges are collinear and
    point the same way."""
    pts = list(points)
    changed = True
    while changed and len(pts) > 3:
        changed = False
        for i in range(len(pts)):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            u, v = b - a, c - b
            if abs(skew(u, v)) <= EPS_ANGLE * u.norm() * v.norm() and u.dot(v) > 0:
                del pts[i]
                changed = True
                break
    return pts
