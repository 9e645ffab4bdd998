"""SVG 1.1 figures: polygons with their aco witness arcs, separation wedges,
and slope diagrams (cumulative turn against normalised arc length)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

from .geom_core import Polygon, Vec2, aco_polygon
from .separation import AngularRegion

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass(frozen=True)
class Style:
    width: int = 480
    height: int = 480
    margin: float = 0.05
    fill_opacity: float = 0.3
    stroke: float = 1.5


def _fmt(v: float) -> str:
    return f"{v:.6g}"


class _Frame:
    """Maps a world box (with margin) onto a pixel box, y pointing up."""

    def __init__(self, box, x0: float, y0: float, w: float, h: float, margin: float):
        bx0, by0, bx1, by1 = box
        dx = (bx1 - bx0) or 1.0
        dy = (by1 - by0) or 1.0
        bx0, bx1 = bx0 - margin * dx, bx1 + margin * dx
        by0, by1 = by0 - margin * dy, by1 + margin * dy
        self.scale = min(w / (bx1 - bx0), h / (by1 - by0))
        self.box = (bx0, by0, bx1, by1)
        self.x0 = x0 + 0.5 * (w - self.scale * (bx1 - bx0))
        self.y0 = y0 + 0.5 * (h + self.scale * (by1 - by0))

    def __call__(self, x: float, y: float) -> str:
        bx0, by0 = self.box[0], self.box[1]
        return f"{_fmt(self.x0 + self.scale * (x - bx0))},{_fmt(self.y0 - self.scale * (y - by0))}"


def _union_box(polys: Sequence[Polygon], points: Sequence[Vec2]):
    xs, ys = [], []
    for k in polys:
        x0, y0, x1, y1 = k.bbox()
        xs += [x0, x1]
        ys += [y0, y1]
    xs += [p.x for p in points]
    ys += [p.y for p in points]
    return min(xs), min(ys), max(xs), max(ys)


def _witness_arc(k: Polygon) -> list[Vec2]:
    rep = aco_polygon(k)
    n = len(k)
    if rep.value >= 0.0:
        return []
    count = (rep.witness_end - rep.witness_start) % n + 1
    verts = k.vertices
    return [verts[(rep.witness_start + i) % n] for i in range(count + 1)]


def _wedge(region: AngularRegion, reach: float) -> list[Vec2]:
    steps = max(2, int(region.measure / 0.1))
    a0 = region.ray1_dir.angle()
    arc = [region.apex + Vec2.polar(a0 + region.measure * j / steps, reach) for j in range(steps + 1)]
    return [region.apex] + arc


def scene(polys: Sequence[tuple[str, Polygon]], regions: Sequence[AngularRegion] = (),
          style: Style = Style(), x0: float = 0.0, y0: float = 0.0) -> list[str]:
    shapes = [k for _, k in polys]
    frame = _Frame(_union_box(shapes, [r.apex for r in regions]), x0, y0,
                   style.width, style.height, style.margin)
    bx0, by0, bx1, by1 = frame.box
    reach = 2.0 * math.hypot(bx1 - bx0, by1 - by0)
    clip = f"clip{int(x0)}"
    out = [f'<clipPath id="{clip}"><rect x="{_fmt(x0)}" y="{_fmt(y0)}" '
           f'width="{style.width}" height="{style.height}"/></clipPath>',
           f'<g clip-path="url(#{clip})">']
    for region in regions:
        pts = " ".join(frame(p.x, p.y) for p in _wedge(region, reach))
        out.append(f'<polygon points="{pts}" fill="#888888" fill-opacity="0.25" stroke="#444444" '
                   f'stroke-width="1" stroke-dasharray="4 3"/>')
        cx, cy = frame(region.apex.x, region.apex.y).split(",")
        out.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="#000000"/>')
    for idx, (name, k) in enumerate(polys):
        color = PALETTE[idx % len(PALETTE)]
        pts = " ".join(frame(v.x, v.y) for v in k.vertices)
        out.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="{style.fill_opacity}" '
                   f'stroke="{color}" stroke-width="{style.stroke}"><title>{escape(name)}</title></polygon>')
        arc = _witness_arc(k)
        if arc:
            path = " ".join(frame(v.x, v.y) for v in arc)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                       f'stroke-width="{3 * style.stroke}" stroke-opacity="0.8"/>')
    out.append("</g>")
    return out


def slope_points(k: Polygon) -> list[tuple[float, float]]:
    """(T, cumulative turn) steps: flat along each edge, a jump at each vertex."""
    turns = k.boundary.turn_angles()
    lengths = [s.length for s in k.boundary.shifts]
    total = math.fsum(lengths)
    pts = [(0.0, 0.0)]
    t = acc = 0.0
    for length, turn in zip(lengths, turns):
        t += length / total
        pts.append((t, acc))
        acc += turn
        pts.append((t, acc))
    return pts


def slope_diagram(polys: Sequence[tuple[str, Polygon]], style: Style = Style(),
                  x0: float = 0.0, y0: float = 0.0) -> list[str]:
    curves = [slope_points(k) for _, k in polys]
    lo = min(min(v for _, v in c) for c in curves)
    hi = max(max(v for _, v in c) for c in curves)
    frame = _Frame((0.0, lo, 1.0, hi), x0, y0, style.width, style.height, style.margin)
    out = [f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{style.width}" height="{style.height}" '
           f'fill="none" stroke="#cccccc"/>']
    for level in range(math.floor(lo / (math.pi / 2)), math.ceil(hi / (math.pi / 2)) + 1):
        v = level * math.pi / 2
        out.append(f'<polyline points="{frame(0.0, v)} {frame(1.0, v)}" stroke="#eeeeee" fill="none"/>')
    for idx, ((name, _), c) in enumerate(zip(polys, curves)):
        color = PALETTE[idx % len(PALETTE)]
        path = " ".join(frame(t, v) for t, v in c)
        out.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                   f'stroke-width="{style.stroke}"><title>{escape(name)}</title></polyline>')
    return out


def render_svg(polys: Sequence[tuple[str, Polygon]], regions: Sequence[AngularRegion] = (),
               style: Style = Style(), slopes: bool = True) -> str:
    """Scene panel on the left, slope diagram panel on the right."""
    if not polys:
        raise ValueError("nothing to draw")
    width = style.width * (2 if slopes else 1)
    body = scene(polys, regions, style)
    if slopes:
        body += slope_diagram(polys, style, x0=style.width)
    head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
            f'height="{style.height}" viewBox="0 0 {width} {style.height}">')
    return "\n".join([head, '<rect width="100%" height="100%" fill="#ffffff"/>', *body, "</svg>"]) + "\n"
