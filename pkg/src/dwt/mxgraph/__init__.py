"""Typed in-memory model of the supported draw.io/mxGraph XML subset.

Exposes the document model plus lossless parse/serialize and the
programmatic assembly path used by the generation pipeline.
"""

from dwt.mxgraph.model import (
    Cell,
    CellKind,
    Geometry,
    GraphDocument,
    GraphModel,
    HostMeta,
    Point,
    StyleMap,
)
from dwt.mxgraph.parser import ParseError, ParseErrorKind, parse_document
from dwt.mxgraph.serializer import serialize_document
from dwt.mxgraph.builder import BuildError, EdgeSpec, NodeSpec, StyleCatalog, build_document

__all__ = [
    "BuildError",
    "Cell",
    "CellKind",
    "EdgeSpec",
    "Geometry",
    "GraphDocument",
    "GraphModel",
    "HostMeta",
    "NodeSpec",
    "ParseError",
    "ParseErrorKind",
    "Point",
    "StyleCatalog",
    "StyleMap",
    "build_document",
    "parse_document",
    "serialize_document",
]
