"""SVG rendering of graph models.

The output is a plain SVG 1.1 subset: one element with class ``shape`` per
vertex, one ``connector`` polyline per edge, ``frame`` rectangles for
groups, and ``label`` text. Shape elements carry ``data-shape`` and
``data-box`` hints that the companion rasterizer consumes. Identical
(model, options) pairs yield byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional
from xml.sax.saxutils import escape, quoteattr

from dwt.mxgraph.model import Cell, CellKind, GraphModel, Point

#: shape vocabulary the renderer accepts; None in a style means "rectangle".
SUPPORTED_SHAPES = (
    "rectangle",
    "rounded",
    "ellipse",
    "rhombus",
    "triangle",
    "hexagon",
    "cylinder",
    "parallelogram",
    "text",
    "group",
)

DEFAULT_FILL = "#FFFFFF"
DEFAULT_STROKE = "#000000"
DEFAULT_FONT_COLOR = "#000000"
FONT_FAMILY = "Helvetica, Arial, sans-serif"
#: average glyph width as a fraction of the font size; keeps wrap metrics
#: independent of any installed font.
CHAR_WIDTH_RATIO = 0.58
SIZE_LADDER = (12, 10, 8)


class RenderErrorKind(Enum):
    UNKNOWN_SHAPE_TOKEN = "UnknownShapeToken"
    NON_FINITE_COORDINATE = "NonFiniteCoordinate"
    UNROUTABLE_EDGE = "UnroutableEdge"


class RenderError(ValueError):
    def __init__(self, kind: RenderErrorKind, message: str):
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind


@dataclass(frozen=True)
class RenderOptions:
    scale: float = 1.0
    background: tuple[int, int, int] = (255, 255, 255)
    padding: float = 10.0
    font_size: float = 12.0


def _fmt(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _finite(value: float, context: str) -> float:
    if not math.isfinite(value):
        raise RenderError(RenderErrorKind.NON_FINITE_COORDINATE, f"{context} is not finite")
    return value


def _shape_token(cell: Cell) -> str:
    token = cell.style.base_shape
    if cell.kind is CellKind.GROUP:
        return "group"
    if token is None:
        return "rectangle"
    if token not in SUPPORTED_SHAPES:
        raise RenderError(
            RenderErrorKind.UNKNOWN_SHAPE_TOKEN,
            f"cell \"{cell.id}\" uses unsupported shape token \"{token}\"",
        )
    return token


def render_svg(model: GraphModel, opts: RenderOptions = RenderOptions()) -> str:
    if opts.scale <= 0:
        raise ValueError("scale must be positive")
    boxes: dict[str, tuple[float, float, float, float]] = {}
    shapes: dict[str, str] = {}
    for cell in model.cells:
        if cell.is_vertex_like:
            shapes[cell.id] = _shape_token(cell)
            x, y = model.absolute_origin(cell)
            g = cell.geometry
            assert g is not None
            boxes[cell.id] = (
                _finite(x, f"cell {cell.id} x"),
                _finite(y, f"cell {cell.id} y"),
                _finite(g.width, f"cell {cell.id} width"),
                _finite(g.height, f"cell {cell.id} height"),
            )
        elif cell.kind is CellKind.EDGE and cell.geometry is not None:
            for p in cell.geometry.waypoints + tuple(
                q for q in (cell.geometry.source_point, cell.geometry.target_point) if q is not None
            ):
                _finite(p.x, f"edge {cell.id} point x")
                _finite(p.y, f"edge {cell.id} point y")

    min_x = min_y = 0.0
    max_x = max_y = 0.0
    def grow(x: float, y: float) -> None:
        nonlocal min_x, min_y, max_x, max_y
        min_x, min_y = min(min_x, x), min(min_y, y)
        max_x, max_y = max(max_x, x), max(max_y, y)

    for x, y, w, h in boxes.values():
        grow(x, y)
        grow(x + w, y + h)
    for cell in model.iter_kind(CellKind.EDGE):
        if cell.geometry is None:
            continue
        for p in cell.geometry.waypoints:
            grow(p.x, p.y)
        for p in (cell.geometry.source_point, cell.geometry.target_point):
            if p is not None:
                grow(p.x, p.y)

    s = opts.scale
    pad = opts.padding
    tx = pad - min_x * s
    ty = pad - min_y * s
    width = (max_x - min_x) * s + 2 * pad
    height = (max_y - min_y) * s + 2 * pad

    def px(x: float) -> float:
        return x * s + tx

    def py(y: float) -> float:
        return y * s + ty

    bg = "#%02X%02X%02X" % opts.background
    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
    )
    out.append(
        '<defs><marker id="arrow" markerWidth="10" markerHeight="8" refX="9" refY="4" orient="auto" '
        'markerUnits="userSpaceOnUse"><path d="M0,0 L10,4 L0,8 Z" fill="context-stroke"/></marker></defs>'
    )
    out.append(f'<rect class="background" x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="{bg}"/>')

    for cell in model.cells:
        if cell.is_vertex_like:
            _emit_node(out, cell, boxes[cell.id], shapes[cell.id], s, px, py, opts)
        else:
            _emit_edge(out, cell, boxes, s, px, py, opts)

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _style_color(cell: Cell, key: str, default: str) -> Optional[str]:
    value = cell.style.get(key)
    if value is None:
        return default
    if value == "none":
        return None
    return value


def _emit_node(out, cell, box, token, s, px, py, opts) -> None:
    x, y, w, h = box
    cx, cy = px(x), py(y)
    cw, ch = w * s, h * s
    databox = f"{_fmt(cx)},{_fmt(cy)},{_fmt(cw)},{_fmt(ch)}"

    if token == "group":
        out.append(
            f'<rect class="frame" data-box="{databox}" x="{_fmt(cx)}" y="{_fmt(cy)}" '
            f'width="{_fmt(cw)}" height="{_fmt(ch)}" fill="none" stroke="#9E9E9E" stroke-dasharray="4,4"/>'
        )
        _emit_label(out, cell, cx, cy, cw, ch, s, opts, at_top=True)
        return

    fill = _style_color(cell, "fillColor", "none" if token == "text" else DEFAULT_FILL)
    stroke = _style_color(cell, "strokeColor", None if token == "text" else DEFAULT_STROKE)
    stroke_width = cell.style.get("strokeWidth", "1")
    paint = f'fill="{fill or "none"}" stroke="{stroke or "none"}"'
    if stroke is not None and stroke_width != "1":
        paint += f' stroke-width="{_fmt(float(stroke_width))}"'
    if cell.style.get("dashed") == "1":
        paint += ' stroke-dasharray="6,3"'
    common = f'class="shape" data-shape="{token}" data-box="{databox}"'

    if token in ("rectangle", "text"):
        out.append(f'<rect {common} x="{_fmt(cx)}" y="{_fmt(cy)}" width="{_fmt(cw)}" height="{_fmt(ch)}" {paint}/>')
    elif token == "rounded":
        r = min(12 * s, cw / 4, ch / 4)
        out.append(
            f'<rect {common} x="{_fmt(cx)}" y="{_fmt(cy)}" width="{_fmt(cw)}" height="{_fmt(ch)}" '
            f'rx="{_fmt(r)}" {paint}/>'
        )
    elif token == "ellipse":
        out.append(
            f'<ellipse {common} cx="{_fmt(cx + cw / 2)}" cy="{_fmt(cy + ch / 2)}" '
            f'rx="{_fmt(cw / 2)}" ry="{_fmt(ch / 2)}" {paint}/>'
        )
    elif token in ("rhombus", "triangle", "hexagon", "parallelogram"):
        pts = _polygon_points(token, cx, cy, cw, ch)
        text = " ".join(f"{_fmt(ax)},{_fmt(ay)}" for ax, ay in pts)
        out.append(f'<polygon {common} points="{text}" {paint}/>')
    elif token == "cylinder":
        ry = min(ch * 0.2, cw * 0.5)
        d = (
            f"M {_fmt(cx)},{_fmt(cy + ry)} "
            f"A {_fmt(cw / 2)},{_fmt(ry)} 0 0 1 {_fmt(cx + cw)},{_fmt(cy + ry)} "
            f"L {_fmt(cx + cw)},{_fmt(cy + ch - ry)} "
            f"A {_fmt(cw / 2)},{_fmt(ry)} 0 0 1 {_fmt(cx)},{_fmt(cy + ch - ry)} Z "
            f"M {_fmt(cx)},{_fmt(cy + ry)} "
            f"A {_fmt(cw / 2)},{_fmt(ry)} 0 0 0 {_fmt(cx + cw)},{_fmt(cy + ry)}"
        )
        out.append(f'<path {common} d="{d}" {paint}/>')
    else:  # unreachable: _shape_token filters tokens
        raise RenderError(RenderErrorKind.UNKNOWN_SHAPE_TOKEN, token)

    _emit_label(out, cell, cx, cy, cw, ch, s, opts)


def _polygon_points(token: str, x: float, y: float, w: float, h: float) -> list[tuple[float, float]]:
    if token == "rhombus":
        return [(x + w / 2, y), (x + w, y + h / 2), (x + w / 2, y + h), (x, y + h / 2)]
    if token == "triangle":
        # draw.io convention: isosceles pointing east
        return [(x, y), (x + w, y + h / 2), (x, y + h)]
    if token == "hexagon":
        return [
            (x + 0.25 * w, y),
            (x + 0.75 * w, y),
            (x + w, y + h / 2),
            (x + 0.75 * w, y + h),
            (x + 0.25 * w, y + h),
            (x, y + h / 2),
        ]
    # parallelogram
    return [(x + 0.2 * w, y), (x + w, y), (x + 0.8 * w, y + h), (x, y + h)]


def _wrap_label(text: str, box_width: float, s: float, base_size: float) -> tuple[list[str], float]:
    """Greedy word wrap onto the widest ladder size that fits."""
    words = text.split()
    if not words:
        return [], base_size * s
    for size in SIZE_LADDER:
        fsize = size * s * (base_size / 12.0)
        limit = max(1, int(box_width / (CHAR_WIDTH_RATIO * fsize)))
        lines: list[str] = []
        current = ""
        for word in words:
            candidate = f"{current} {word}".strip()
            if len(candidate) <= limit or not current:
                current = candidate
            else:
                lines.append(current)
                current = word
        lines.append(current)
        if all(len(line) <= limit for line in lines):
            return lines, fsize
    return lines, fsize


def _emit_label(out, cell, cx, cy, cw, ch, s, opts, at_top: bool = False) -> None:
    if not cell.value:
        return
    base = float(cell.style.get("fontSize", str(opts.font_size)))
    lines, fsize = _wrap_label(cell.value, cw, s, base)
    if not lines:
        return
    color = _style_color(cell, "fontColor", DEFAULT_FONT_COLOR) or DEFAULT_FONT_COLOR
    line_height = fsize * 1.2
    anchor_x = cx + cw / 2
    if at_top:
        first_y = cy + fsize
    else:
        first_y = cy + ch / 2 - (len(lines) - 1) * line_height / 2 + fsize * 0.35
    tspans = "".join(
        f'<tspan x="{_fmt(anchor_x)}" y="{_fmt(first_y + i * line_height)}">{escape(line)}</tspan>'
        for i, line in enumerate(lines)
    )
    out.append(
        f'<text class="label" font-family={quoteattr(FONT_FAMILY)} font-size="{_fmt(fsize)}" '
        f'fill="{color}" text-anchor="middle">{tspans}</text>'
    )


def _boundary_point(box: tuple[float, float, float, float], toward: Point) -> Point:
    x, y, w, h = box
    cx, cy = x + w / 2, y + h / 2
    dx, dy = toward.x - cx, toward.y - cy
    if dx == 0 and dy == 0:
        return Point(cx, cy)
    tx = (w / 2) / abs(dx) if dx != 0 else math.inf
    ty = (h / 2) / abs(dy) if dy != 0 else math.inf
    t = min(tx, ty)
    return Point(cx + dx * t, cy + dy * t)


def _center(box: tuple[float, float, float, float]) -> Point:
    x, y, w, h = box
    return Point(x + w / 2, y + h / 2)


def edge_route(cell: Cell, boxes: dict[str, tuple[float, float, float, float]]) -> list[Point]:
    """Model-space polyline for an edge: anchors plus explicit waypoints."""
    geom = cell.geometry
    waypoints = list(geom.waypoints) if geom else []
    source_box = boxes.get(cell.source) if cell.source else None
    target_box = boxes.get(cell.target) if cell.target else None
    source_pt = geom.source_point if geom else None
    target_pt = geom.target_point if geom else None

    if target_box is not None:
        t_hint: Optional[Point] = _center(target_box)
    else:
        t_hint = target_pt or (waypoints[-1] if waypoints else None)
    if source_box is not None:
        s_hint: Optional[Point] = _center(source_box)
    else:
        s_hint = source_pt or (waypoints[0] if waypoints else None)

    if source_box is not None:
        toward = waypoints[0] if waypoints else t_hint
        if toward is None:
            raise RenderError(RenderErrorKind.UNROUTABLE_EDGE, f"edge \"{cell.id}\" has no target side")
        start = _boundary_point(source_box, toward)
    elif source_pt is not None:
        start = source_pt
    elif waypoints:
        start = waypoints.pop(0)
    else:
        raise RenderError(RenderErrorKind.UNROUTABLE_EDGE, f"edge \"{cell.id}\" has no source side")

    if target_box is not None:
        toward = waypoints[-1] if waypoints else s_hint
        if toward is None:
            raise RenderError(RenderErrorKind.UNROUTABLE_EDGE, f"edge \"{cell.id}\" has no source side")
        end = _boundary_point(target_box, toward)
    elif target_pt is not None:
        end = target_pt
    elif waypoints:
        end = waypoints.pop()
    else:
        raise RenderError(RenderErrorKind.UNROUTABLE_EDGE, f"edge \"{cell.id}\" has no target side")

    return [start, *waypoints, end]


def _emit_edge(out, cell, boxes, s, px, py, opts) -> None:
    route = edge_route(cell, boxes)
    pts = [(px(p.x), py(p.y)) for p in route]
    text = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
    stroke = _style_color(cell, "strokeColor", DEFAULT_STROKE) or DEFAULT_STROKE
    dash = ' stroke-dasharray="6,3"' if cell.style.get("dashed") == "1" else ""
    marker = "" if cell.style.get("endArrow") == "none" else ' marker-end="url(#arrow)"'
    out.append(
        f'<polyline class="connector" points="{text}" fill="none" stroke="{stroke}"'
        f'{dash}{marker}/>'
    )
    if cell.value:
        mid = len(pts) // 2
        if len(pts) % 2 == 0:
            mx = (pts[mid - 1][0] + pts[mid][0]) / 2
            my = (pts[mid - 1][1] + pts[mid][1]) / 2
        else:
            mx, my = pts[mid]
        fsize = float(cell.style.get("fontSize", str(opts.font_size))) * s
        color = _style_color(cell, "fontColor", DEFAULT_FONT_COLOR) or DEFAULT_FONT_COLOR
        out.append(
            f'<text class="label" font-family={quoteattr(FONT_FAMILY)} font-size="{_fmt(fsize)}" '
            f'fill="{color}" text-anchor="middle">'
            f'<tspan x="{_fmt(mx)}" y="{_fmt(my - 4 * s)}">{escape(cell.value)}</tspan></text>'
        )
