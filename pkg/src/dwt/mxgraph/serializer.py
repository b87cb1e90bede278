"""Deterministic XML emission for :class:`GraphDocument`.

Attribute order, indentation, and number formatting are all fixed, so the
same document always serializes to the same bytes. Parsing the output
yields a document equal to the input.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from dwt.mxgraph.model import (
    Cell,
    CellKind,
    Geometry,
    GraphDocument,
    Point,
    format_number,
)


def serialize_document(doc: GraphDocument) -> str:
    model_el = _model_element(doc)
    if doc.host_meta.wrapped:
        mxfile = ET.Element("mxfile", dict(doc.host_meta.file_attrs))
        diagram_attrs: dict[str, str] = {}
        if doc.host_meta.diagram_id:
            diagram_attrs["id"] = doc.host_meta.diagram_id
        if doc.host_meta.diagram_name:
            diagram_attrs["name"] = doc.host_meta.diagram_name
        diagram_attrs.update(doc.host_meta.diagram_attrs)
        diagram = ET.SubElement(mxfile, "diagram", diagram_attrs)
        diagram.append(model_el)
        root = mxfile
    else:
        root = model_el
    ET.indent(root, space="  ")
    return ET.tostring(root, encoding="unicode") + "\n"


def _model_element(doc: GraphDocument) -> ET.Element:
    m = doc.model
    attrs = {
        "dx": str(m.dx),
        "dy": str(m.dy),
        "gridSize": str(m.grid_size),
        "pageWidth": str(m.page_width),
        "pageHeight": str(m.page_height),
    }
    attrs.update(m.extra)
    model_el = ET.Element("mxGraphModel", attrs)
    root = ET.SubElement(model_el, "root")
    ET.SubElement(root, "mxCell", {"id": "0"})
    ET.SubElement(root, "mxCell", {"id": "1", "parent": "0"})
    for cell in m.cells:
        root.append(_cell_element(cell))
    return model_el


def _cell_element(cell: Cell) -> ET.Element:
    attrs: dict[str, str] = {"id": cell.id}
    if cell.value:
        attrs["value"] = cell.value
    style_text = cell.style.to_string()
    if style_text:
        attrs["style"] = style_text
    attrs["parent"] = cell.parent
    if cell.source is not None:
        attrs["source"] = cell.source
    if cell.target is not None:
        attrs["target"] = cell.target
    if cell.kind is CellKind.EDGE:
        attrs["edge"] = "1"
    else:
        attrs["vertex"] = "1"
    attrs.update(cell.extra)
    el = ET.Element("mxCell", attrs)
    if cell.geometry is not None:
        el.append(_geometry_element(cell.geometry, cell.kind))
    return el


def _geometry_element(geom: Geometry, kind: CellKind) -> ET.Element:
    attrs: dict[str, str] = {}
    if kind is CellKind.EDGE:
        # edges keep the compact draw.io convention: zero fields are omitted
        for name, value in (("x", geom.x), ("y", geom.y), ("width", geom.width), ("height", geom.height)):
            if value != 0:
                attrs[name] = format_number(value)
    else:
        attrs["x"] = format_number(geom.x)
        attrs["y"] = format_number(geom.y)
        attrs["width"] = format_number(geom.width)
        attrs["height"] = format_number(geom.height)
    if geom.relative:
        attrs["relative"] = "1"
    attrs["as"] = "geometry"
    el = ET.Element("mxGeometry", attrs)
    if geom.source_point is not None:
        el.append(_point_element(geom.source_point, "sourcePoint"))
    if geom.target_point is not None:
        el.append(_point_element(geom.target_point, "targetPoint"))
    if geom.waypoints:
        array = ET.SubElement(el, "Array", {"as": "points"})
        for point in geom.waypoints:
            array.append(_point_element(point, None))
    return el


def _point_element(point: Point, role: str | None) -> ET.Element:
    attrs = {"x": format_number(point.x), "y": format_number(point.y)}
    if role:
        attrs["as"] = role
    return ET.Element("mxPoint", attrs)
