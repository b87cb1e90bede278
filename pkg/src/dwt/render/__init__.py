"""Deterministic SVG/PNG rendering of graph models."""

from dwt.render.svg import (
    RenderError,
    RenderErrorKind,
    RenderOptions,
    SUPPORTED_SHAPES,
    render_svg,
)
from dwt.render.raster import RasterError, rasterize

__all__ = [
    "RasterError",
    "RenderError",
    "RenderErrorKind",
    "RenderOptions",
    "SUPPORTED_SHAPES",
    "rasterize",
    "render_svg",
]
