"""PNG rasterization of SVG produced by :func:`dwt.render.render_svg`.

This is deliberately a subset rasterizer: it understands exactly the
elements the SVG renderer emits (rect, ellipse, polygon, polyline, the
cylinder path, text) and draws them with Pillow, which keeps raster output
hermetic and deterministic per platform.
"""

from __future__ import annotations

import io
import math
import xml.etree.ElementTree as ET

from PIL import Image, ImageDraw, ImageFont


class RasterError(ValueError):
    pass


def _strip_ns(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _color(value: str | None) -> str | None:
    if value is None or value == "none":
        return None
    return value


def _font(size: float) -> ImageFont.ImageFont:
    try:
        return ImageFont.load_default(size=max(1, round(size)))
    except TypeError:  # Pillow < 10.1 fallback: fixed-size bitmap font
        return ImageFont.load_default()


def rasterize(svg_text: str, dpi_scale: float = 1.0) -> bytes:
    """Render SVG text to PNG bytes; dimensions scale by ``dpi_scale``."""
    if dpi_scale <= 0:
        raise ValueError("dpi_scale must be positive")
    try:
        root = ET.fromstring(svg_text)
    except ET.ParseError as exc:
        raise RasterError(f"malformed SVG: {exc}") from exc
    if _strip_ns(root.tag) != "svg":
        raise RasterError(f"not an SVG document (root <{root.tag}>)")
    try:
        svg_w = float(root.get("width", ""))
        svg_h = float(root.get("height", ""))
    except ValueError as exc:
        raise RasterError("SVG is missing numeric width/height") from exc

    width = math.ceil(svg_w * dpi_scale)
    height = math.ceil(svg_h * dpi_scale)
    image = Image.new("RGB", (max(width, 1), max(height, 1)), "#FFFFFF")
    draw = ImageDraw.Draw(image)
    k = dpi_scale

    # the renderer emits a flat body; defs (arrow marker) are drawn manually
    for el in root:
        tag = _strip_ns(el.tag)
        if tag == "defs":
            continue
        try:
            if tag == "rect":
                _draw_rect(draw, el, k)
            elif tag == "ellipse":
                _draw_ellipse(draw, el, k)
            elif tag == "polygon":
                _draw_polygon(draw, el, k)
            elif tag == "polyline":
                _draw_polyline(draw, el, k)
            elif tag == "path":
                _draw_path(draw, el, k)
            elif tag == "text":
                _draw_text(draw, el, k)
        except (ValueError, KeyError) as exc:
            raise RasterError(f"cannot rasterize <{tag}>: {exc}") from exc

    buffer = io.BytesIO()
    image.save(buffer, format="PNG")
    return buffer.getvalue()


def _stroke_width(el: ET.Element, k: float) -> int:
    return max(1, round(float(el.get("stroke-width", "1")) * k))


def _draw_rect(draw: ImageDraw.ImageDraw, el: ET.Element, k: float) -> None:
    x, y = float(el.get("x", "0")) * k, float(el.get("y", "0")) * k
    w, h = float(el.get("width", "0")) * k, float(el.get("height", "0")) * k
    fill = _color(el.get("fill"))
    stroke = _color(el.get("stroke"))
    if w <= 0 or h <= 0:
        return
    box = (x, y, x + w, y + h)
    rx = float(el.get("rx", "0")) * k
    if rx > 0:
        draw.rounded_rectangle(box, radius=rx, fill=fill, outline=stroke, width=_stroke_width(el, k))
    else:
        draw.rectangle(box, fill=fill, outline=stroke, width=_stroke_width(el, k) if stroke else 1)


def _draw_ellipse(draw: ImageDraw.ImageDraw, el: ET.Element, k: float) -> None:
    cx, cy = float(el.get("cx", "0")) * k, float(el.get("cy", "0")) * k
    rx, ry = float(el.get("rx", "0")) * k, float(el.get("ry", "0")) * k
    draw.ellipse(
        (cx - rx, cy - ry, cx + rx, cy + ry),
        fill=_color(el.get("fill")),
        outline=_color(el.get("stroke")),
        width=_stroke_width(el, k),
    )


def _parse_points(text: str, k: float) -> list[tuple[float, float]]:
    points = []
    for chunk in text.split():
        xs, _, ys = chunk.partition(",")
        points.append((float(xs) * k, float(ys) * k))
    return points


def _draw_polygon(draw: ImageDraw.ImageDraw, el: ET.Element, k: float) -> None:
    pts = _parse_points(el.get("points", ""), k)
    if len(pts) >= 3:
        draw.polygon(pts, fill=_color(el.get("fill")), outline=_color(el.get("stroke")))


def _draw_polyline(draw: ImageDraw.ImageDraw, el: ET.Element, k: float) -> None:
    pts = _parse_points(el.get("points", ""), k)
    stroke = _color(el.get("stroke")) or "#000000"
    if len(pts) < 2:
        return
    dashed = el.get("stroke-dasharray") is not None
    width = _stroke_width(el, k)
    if dashed:
        for a, b in zip(pts, pts[1:]):
            _dashed_line(draw, a, b, stroke, width, 6 * k)
    else:
        draw.line(pts, fill=stroke, width=width)
    if el.get("marker-end"):
        _draw_arrowhead(draw, pts[-2], pts[-1], stroke, k)


def _dashed_line(draw, a, b, color, width, dash) -> None:
    length = math.hypot(b[0] - a[0], b[1] - a[1])
    if length == 0:
        return
    steps = max(1, int(length / dash))
    ux, uy = (b[0] - a[0]) / length, (b[1] - a[1]) / length
    pos = 0.0
    on = True
    for _ in range(steps + 1):
        seg = min(dash, length - pos)
        if seg <= 0:
            break
        if on:
            draw.line(
                [(a[0] + ux * pos, a[1] + uy * pos), (a[0] + ux * (pos + seg), a[1] + uy * (pos + seg))],
                fill=color,
                width=width,
            )
        pos += seg
        on = not on


def _draw_arrowhead(draw, prev: tuple[float, float], tip: tuple[float, float], color: str, k: float) -> None:
    dx, dy = tip[0] - prev[0], tip[1] - prev[1]
    length = math.hypot(dx, dy)
    if length == 0:
        return
    ux, uy = dx / length, dy / length
    size = 10 * k
    half = 4 * k
    base = (tip[0] - ux * size, tip[1] - uy * size)
    left = (base[0] - uy * half, base[1] + ux * half)
    right = (base[0] + uy * half, base[1] - ux * half)
    draw.polygon([tip, left, right], fill=color)


def _draw_path(draw: ImageDraw.ImageDraw, el: ET.Element, k: float) -> None:
    # only the cylinder shape is emitted as a path; data-box carries its frame
    box = el.get("data-box")
    if el.get("data-shape") != "cylinder" or not box:
        raise ValueError("unsupported path element")
    x, y, w, h = (float(v) * k for v in box.split(","))
    fill = _color(el.get("fill"))
    stroke = _color(el.get("stroke"))
    ry = min(h * 0.2, w * 0.5)
    width = _stroke_width(el, k)
    draw.rectangle((x, y + ry, x + w, y + h - ry), fill=fill)
    if stroke:
        draw.line([(x, y + ry), (x, y + h - ry)], fill=stroke, width=width)
        draw.line([(x + w, y + ry), (x + w, y + h - ry)], fill=stroke, width=width)
    draw.ellipse((x, y, x + w, y + 2 * ry), fill=fill, outline=stroke, width=width)
    draw.ellipse((x, y + h - 2 * ry, x + w, y + h), fill=fill, outline=stroke, width=width)
    draw.rectangle((x + width, y + ry, x + w - width, y + h - 2 * ry), fill=fill)


def _draw_text(draw: ImageDraw.ImageDraw, el: ET.Element, k: float) -> None:
    size = float(el.get("font-size", "12"))
    fill = _color(el.get("fill")) or "#000000"
    font = _font(size * k)
    for child in el:
        if _strip_ns(child.tag) != "tspan":
            continue
        x = float(child.get("x", "0")) * k
        y = float(child.get("y", "0")) * k
        draw.text((x, y), child.text or "", font=font, fill=fill, anchor="ms")
