"""Sorted sum of two polylines and its monotone parameterisation maps.

The merge repeatedly emits the head of whichever remaining shift sequence has
the larger rotation, preferring the first sequence on ties.  For two convex
chains this is the classic slope-sorted edge merge.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from enum import Enum

from .errors import AcoPreconditionViolated, RotationsDiffer, StartsNotAligned, TagMismatch
from .geom_core import EPS_ANGLE, Polyline, Shift, Vec2, aco_open, rot, signed_angle


class Source(Enum):
    FROM_P = "P"
    FROM_Q = "Q"


FROM_P = Source.FROM_P
FROM_Q = Source.FROM_Q


@dataclass(frozen=True)
class MergedChain:
    result: Polyline
    tags: tuple[Source, ...]

    def shifts_from(self, source: Source) -> list[Shift]:
        return [s for s, t in zip(self.result.shifts, self.tags) if t is source]


def validate_pair(p: Polyline, q: Polyline) -> None:
    """Raise unless the chains start in the same direction and have equal rotation."""
    if abs(signed_angle(p.shifts[0].direction, q.shifts[0].direction)) > EPS_ANGLE:
        raise StartsNotAligned("first shifts of P and Q point in different directions")
    rp, rq = rot(p), rot(q)
    if abs(rp - rq) > EPS_ANGLE:
        raise RotationsDiffer(f"rot P = {rp:.12g} but rot Q = {rq:.12g}")
    # equal start direction and rotation force equal end direction
    assert abs(signed_angle(p.shifts[-1].direction, q.shifts[-1].direction)) <= 10 * EPS_ANGLE


def _suffix_rotations(p: Polyline) -> list[float]:
    """``out[i]`` is the rotation of ``S(P)[i:]``; the empty suffix has 0."""
    turns = p.turn_angles()
    out = [0.0] * (len(p.shifts) + 1)
    for i in range(len(turns) - 1, -1, -1):
        out[i] = out[i + 1] + turns[i]
    return out


def sorted_sum(p: Polyline, q: Polyline) -> MergedChain:
    if p.closed or q.closed:
        raise ValueError("sorted sum takes open polylines")
    validate_pair(p, q)
    for name, chain in (("P", p), ("Q", q)):
        a = aco_open(chain).value
        if a <= -math.pi + EPS_ANGLE:
            raise AcoPreconditionViolated(f"aco {name} = {a:.12g} <= -pi")

    sp, sq = p.shifts, q.shifts
    rp, rq = _suffix_rotations(p), _suffix_rotations(q)
    i = j = 0
    out: list[Shift] = []
    tags: list[Source] = []
    while i < len(sp) or j < len(sq):
        if j == len(sq) or (i < len(sp) and rp[i] >= rq[j] - EPS_ANGLE):
            out.append(sp[i])
            tags.append(FROM_P)
            i += 1
        else:
            out.append(sq[j])
            tags.append(FROM_Q)
            j += 1
    return MergedChain(Polyline(p.start + q.start, tuple(out)), tuple(tags))


def drop_virtual(m: MergedChain) -> MergedChain:
    """Remove zero-length shifts, keeping the tags of the surviving ones."""
    keep = [k for k, s in enumerate(m.result.shifts) if not s.virtual]
    shifts = tuple(m.result.shifts[k] for k in keep)
    tags = tuple(m.tags[k] for k in keep)
    return MergedChain(Polyline(m.result.start, shifts, m.result.closed), tags)


@dataclass(frozen=True)
class ParamMap:
    """Continuous non-decreasing piecewise-linear map of [0, 1] onto itself."""

    breakpoints: tuple[tuple[float, float], ...]

    def __call__(self, t: float) -> float:
        ts = [b[0] for b in self.breakpoints]
        k = bisect.bisect_right(ts, t) - 1
        k = min(max(k, 0), len(ts) - 2)
        (t0, v0), (t1, v1) = self.breakpoints[k], self.breakpoints[k + 1]
        if t1 == t0:
            return v1
        return v0 + (v1 - v0) * (min(max(t, t0), t1) - t0) / (t1 - t0)


def uniform_point(p: Polyline, t: float) -> Vec2:
    """Point of ``p`` when vertex ``k`` sits at ``t = k / n`` (edges traversed uniformly)."""
    n = len(p.shifts)
    t = min(max(t, 0.0), 1.0)
    k = min(int(t * n), n - 1)
    return p.vertices[k] + p.shifts[k].vector * (t * n - k)


def _same_shift(a: Shift, b: Shift) -> bool:
    return a.virtual == b.virtual and a.direction == b.direction and a.length == b.length


def param_maps(m: MergedChain, p: Polyline, q: Polyline) -> tuple[ParamMap, ParamMap]:
    """The maps phi, psi with ``r(t) = p(phi(t)) + q(psi(t))`` under uniform
    per-edge parameterisations of ``p``, ``q`` and the merged chain."""
    n, k = len(p.shifts), len(q.shifts)
    total = len(m.result.shifts)
    from_p, from_q = m.shifts_from(FROM_P), m.shifts_from(FROM_Q)
    if (total != n + k or len(from_p) != n
            or not all(_same_shift(a, b) for a, b in zip(from_p, p.shifts))
            or not all(_same_shift(a, b) for a, b in zip(from_q, q.shifts))):
        raise TagMismatch("merged chain was not generated from these polylines")
    if (m.result.start - (p.start + q.start)).norm() > 10 * max(p.eps, q.eps):
        raise TagMismatch("merged chain does not start at p.start + q.start")

    phi, psi = [(0.0, 0.0)], [(0.0, 0.0)]
    a = b = 0
    for idx, tag in enumerate(m.tags, start=1):
        t = idx / total
        if tag is FROM_P:
            a += 1
        else:
            b += 1
        phi.append((t, a / n))
        psi.append((t, b / k))
    return ParamMap(_compress(phi)), ParamMap(_compress(psi))


def _compress(points: list[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    """Drop breakpoints in the middle of straight runs."""
    out = [points[0]]
    for k in range(1, len(points) - 1):
        (t0, v0), (t1, v1), (t2, v2) = out[-1], points[k], points[k + 1]
        if abs((v1 - v0) * (t2 - t1) - (v2 - v1) * (t1 - t0)) > 1e-15:
            out.append(points[k])
    out.append(points[-1])
    return tuple(out)
