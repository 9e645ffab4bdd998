"""Polygon documents: UTF-8 JSON with a name and a ``vertices`` array.

    {"name": "square", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}

A repeated closing vertex is dropped and clockwise input is reversed on load.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError
from .geom_core import Polygon, orient_ccw


@dataclass(frozen=True)
class PolygonDocument:
    name: str
    polygon: Polygon


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _fail(text: str, message: str, key: str = "vertices") -> ParseError:
    off = text.find(f'"{key}"')
    return ParseError(message, *_position(text, max(off, 0)))


def parse_document(text: str) -> PolygonDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(data, dict):
        raise ParseError("document must be an object", 1, 1)
    name = data.get("name", "")
    if not isinstance(name, str):
        raise _fail(text, "name must be a string", "name")
    raw = data.get("vertices")
    if not isinstance(raw, list):
        raise _fail(text, "missing vertices array")
    pts = []
    for k, v in enumerate(raw):
        if (not isinstance(v, list) or len(v) != 2
                or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
            raise _fail(text, f"vertex {k} is not an [x, y] pair of numbers")
        if not all(math.isfinite(c) for c in v):
            raise _fail(text, f"vertex {k} has a non-finite coordinate")
        pts.append((float(v[0]), float(v[1])))
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    if len(pts) < 3:
        raise _fail(text, f"a polygon needs at least 3 distinct vertices, got {len(pts)}")
    return PolygonDocument(name, orient_ccw(pts))


def parse_polygon(text: str) -> Polygon:
    return parse_document(text).polygon


def serialize_polygon(k: Polygon, name: str = "") -> str:
    rows = ",\n".join(f"    [{v.x!r}, {v.y!r}]" for v in k.vertices)
    return f'{{\n  "name": {json.dumps(name)},\n  "vertices": [\n{rows}\n  ]\n}}\n'


def load(path: str | Path) -> PolygonDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}", 1, 1) from exc
    doc = parse_document(text)
    return doc if doc.name else PolygonDocument(Path(path).stem, doc.polygon)


def save(path: str | Path, k: Polygon, name: str = "") -> None:
    Path(path).write_text(serialize_polygon(k, name), encoding="utf-8")
