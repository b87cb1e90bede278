"""Layered structural scan of candidate mxGraph XML.

Both the strict parser and the validity gate are built on this scan: it
walks a candidate document through the wellformed → schema → references →
geometry layers, collecting coded issues rather than raising, and assembles
a typed :class:`GraphDocument` when no error-severity issue was found.

An error in one layer suppresses all later layers (their checks would be
meaningless on broken input); warnings never suppress anything.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Optional

from dwt.mxgraph.model import (
    DEFAULT_PARENT,
    STRUCTURAL_IDS,
    Cell,
    CellKind,
    Geometry,
    GraphDocument,
    GraphModel,
    HostMeta,
    Point,
    StyleMap,
)

LAYERS = ("wellformed", "schema", "references", "geometry", "render")

ERROR = "Error"
WARNING = "Warning"

#: style tokens that mark a vertex cell as a group container.
GROUP_TOKENS = ("group",)

#: typed mxGraphModel attributes; everything else passes through.
MODEL_INT_ATTRS = ("dx", "dy", "gridSize", "pageWidth", "pageHeight")


@dataclass
class Issue:
    severity: str
    code: str
    layer: str
    location: str
    message: str


@dataclass
class ScanOutcome:
    issues: list[Issue] = field(default_factory=list)
    document: Optional[GraphDocument] = None
    #: first layer that produced an error, if any
    failed_layer: Optional[str] = None
    #: layers that were skipped because an earlier layer failed hard
    skipped_layers: tuple[str, ...] = ()

    @property
    def errors(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == ERROR]


@dataclass
class _RawCell:
    index: int
    element: ET.Element
    location: str
    id: Optional[str]
    kind: Optional[CellKind] = None
    style: StyleMap = StyleMap(token=None, entries=(), trailing_semicolon=False)
    geometry_el: Optional[ET.Element] = None
    geometry: Optional[Geometry] = None
    has_endpoint_points: bool = False
    waypoint_count: int = 0

    @property
    def attrs(self) -> dict[str, str]:
        return self.element.attrib


def _classify_syntax_error(exc: ET.ParseError) -> str:
    msg = str(exc)
    if msg.startswith("no element found") or msg.startswith("unclosed token"):
        return "E_UNCLOSED_TAG"
    if msg.startswith("mismatched tag"):
        return "E_BAD_NESTING"
    return "E_NOT_WELLFORMED"


def scan_text(xml_text: str) -> ScanOutcome:
    outcome = ScanOutcome()

    # layer 1: wellformedness
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        line, col = exc.position
        outcome.issues.append(
            Issue(ERROR, _classify_syntax_error(exc), "wellformed", f"line {line}, column {col}", str(exc))
        )
        outcome.failed_layer = "wellformed"
        outcome.skipped_layers = LAYERS[1:]
        return outcome

    # layer 2: schema conformance of the supported subset
    host_meta, model_el, raw_cells = _scan_schema(root, outcome)
    if outcome.errors:
        outcome.failed_layer = "schema"
        outcome.skipped_layers = LAYERS[2:]
        return outcome

    # layer 3: reference integrity
    assert model_el is not None
    _scan_references(raw_cells, outcome)
    if outcome.errors:
        outcome.failed_layer = "references"
        outcome.skipped_layers = LAYERS[3:]
        return outcome

    # layer 4: geometry sanity
    model = _scan_geometry(model_el, raw_cells, outcome)
    if outcome.errors:
        outcome.failed_layer = "geometry"
        outcome.skipped_layers = LAYERS[4:]
        return outcome

    assert host_meta is not None and model is not None
    outcome.document = GraphDocument(host_meta=host_meta, model=model)
    return outcome


def _scan_schema(
    root: ET.Element, outcome: ScanOutcome
) -> tuple[Optional[HostMeta], Optional[ET.Element], list[_RawCell]]:
    def err(code: str, location: str, message: str) -> None:
        outcome.issues.append(Issue(ERROR, code, "schema", location, message))

    def warn(code: str, location: str, message: str) -> None:
        outcome.issues.append(Issue(WARNING, code, "schema", location, message))

    host_meta: Optional[HostMeta] = None
    model_el: Optional[ET.Element] = None

    if root.tag == "mxfile":
        diagrams = root.findall("diagram")
        if not diagrams:
            err("E_UNSUPPORTED_ROOT", "mxfile", "mxfile contains no diagram element")
            return None, None, []
        if len(diagrams) > 1:
            err("E_MULTIPLE_PAGES", "mxfile", f"multi-page files are unsupported ({len(diagrams)} diagram elements)")
            return None, None, []
        diagram = diagrams[0]
        model_el = diagram.find("mxGraphModel")
        if model_el is None:
            detail = "diagram payload is not an mxGraphModel element"
            if (diagram.text or "").strip():
                detail += " (compressed diagram content is unsupported)"
            err("E_UNSUPPORTED_ROOT", "mxfile/diagram", detail)
            return None, None, []
        diagram_attrs = {k: v for k, v in diagram.attrib.items() if k not in ("name", "id")}
        host_meta = HostMeta(
            wrapped=True,
            file_attrs=dict(root.attrib),
            diagram_name=diagram.get("name", ""),
            diagram_id=diagram.get("id", ""),
            diagram_attrs=diagram_attrs,
        )
    elif root.tag == "mxGraphModel":
        model_el = root
        host_meta = HostMeta(wrapped=False, file_attrs={}, diagram_name="", diagram_id="", diagram_attrs={})
    else:
        err("E_UNSUPPORTED_ROOT", root.tag, f"root element <{root.tag}> is neither mxfile nor mxGraphModel")
        return None, None, []

    root_container = model_el.find("root")
    if root_container is None:
        err("E_MISSING_ROOT_CELLS", "mxGraphModel", "mxGraphModel has no root container element")
        return host_meta, model_el, []

    raw_cells: list[_RawCell] = []
    children = list(root_container)
    for index, child in enumerate(children):
        location = f"root/{child.tag}[{index}]"
        if child.tag != "mxCell":
            err("E_BAD_CELL_KIND", location, f"unsupported cell element <{child.tag}> (only plain mxCell is supported)")
            continue
        cid = child.get("id")
        if cid:
            location = f"mxCell[{index}](id={cid})"
        raw = _RawCell(index=index, element=child, location=location, id=cid)
        raw_cells.append(raw)

        if index < 2:
            # structural roots: fixed ids, no kind flags, no geometry
            expected = STRUCTURAL_IDS[index]
            if cid != expected or child.get("vertex") == "1" or child.get("edge") == "1" or len(child):
                err(
                    "E_MISSING_ROOT_CELLS",
                    location,
                    f"cell #{index} must be the structural root mxCell id=\"{expected}\" with no flags or children",
                )
            continue

        if cid is None:
            err("E_MISSING_ID", location, "cell has no id attribute")
        is_vertex = child.get("vertex") == "1"
        is_edge = child.get("edge") == "1"
        if is_vertex and is_edge:
            err("E_BAD_CELL_KIND", location, "cell is flagged as both vertex and edge")
            continue
        if not is_vertex and not is_edge:
            err("E_BAD_CELL_KIND", location, "cell is neither a vertex nor an edge (layers and custom cells are unsupported)")
            continue

        style = StyleMap.parse(child.get("style", ""))
        raw.style = style
        if style.duplicate_keys:
            warn(
                "W_DUPLICATE_STYLE_KEY",
                location,
                "duplicate style keys collapsed to last value: " + ", ".join(sorted(set(style.duplicate_keys))),
            )
        if is_edge:
            raw.kind = CellKind.EDGE
        elif style.token in GROUP_TOKENS or style.get("container") == "1":
            raw.kind = CellKind.GROUP
        else:
            raw.kind = CellKind.VERTEX

        geom_els = [g for g in child if g.tag == "mxGeometry"]
        strays = [g for g in child if g.tag != "mxGeometry"]
        if strays or len(geom_els) > 1:
            err("E_BAD_CELL_KIND", location, "cell has unsupported child elements")
            continue
        if geom_els:
            raw.geometry_el = geom_els[0]
            for sub in geom_els[0]:
                if sub.tag == "mxPoint" and sub.get("as") in ("sourcePoint", "targetPoint"):
                    raw.has_endpoint_points = True
                elif sub.tag == "Array" and sub.get("as") == "points":
                    raw.waypoint_count = len([p for p in sub if p.tag == "mxPoint"])
                else:
                    err("E_BAD_CELL_KIND", location, f"unsupported geometry child <{sub.tag} as={sub.get('as')!r}>")
        if raw.kind in (CellKind.VERTEX, CellKind.GROUP) and raw.geometry_el is None:
            err("E_MISSING_GEOMETRY", location, "vertex cell has no mxGeometry element")

    return host_meta, model_el, raw_cells


def _scan_references(raw_cells: list[_RawCell], outcome: ScanOutcome) -> None:
    def err(code: str, location: str, message: str) -> None:
        outcome.issues.append(Issue(ERROR, code, "references", location, message))

    def warn(code: str, location: str, message: str) -> None:
        outcome.issues.append(Issue(WARNING, code, "references", location, message))

    user_cells = raw_cells[2:]
    seen: dict[str, _RawCell] = {}
    for raw in user_cells:
        assert raw.id is not None
        if raw.id in STRUCTURAL_IDS:
            err("E_DUPLICATE_ID", raw.location, f"id \"{raw.id}\" is reserved for the structural roots")
        elif raw.id in seen:
            err("E_DUPLICATE_ID", raw.location, f"id \"{raw.id}\" is already declared")
        else:
            seen[raw.id] = raw

    vertex_like = {r.id for r in user_cells if r.kind in (CellKind.VERTEX, CellKind.GROUP)}
    declared_before: set[str] = set()
    for raw in user_cells:
        parent = raw.element.get("parent", DEFAULT_PARENT)
        if parent != DEFAULT_PARENT:
            owner = seen.get(parent)
            if parent not in declared_before or owner is None:
                err("E_ORPHAN_PARENT", raw.location, f"parent \"{parent}\" is not declared earlier in the cell list")
            elif owner.kind is CellKind.EDGE:
                err("E_ORPHAN_PARENT", raw.location, f"parent \"{parent}\" is an edge; only groups may contain cells")
        if raw.kind is CellKind.EDGE:
            source = raw.element.get("source")
            target = raw.element.get("target")
            for side, ref in (("source", source), ("target", target)):
                if ref is None:
                    continue
                if ref not in seen:
                    err("E_DANGLING_EDGE", raw.location, f"{side} \"{ref}\" does not reference any declared cell")
                elif ref not in vertex_like:
                    err("E_DANGLING_EDGE", raw.location, f"{side} \"{ref}\" references an edge; endpoints must be vertices or groups")
            if source is None and target is None and not raw.has_endpoint_points and raw.waypoint_count < 2:
                err("E_DANGLING_EDGE", raw.location, "edge has neither endpoints nor explicit endpoint points")
            elif (source is None or target is None) and not raw.has_endpoint_points:
                warn("W_FLOATING_EDGE", raw.location, "edge is attached on only one side")
        if raw.id is not None:
            declared_before.add(raw.id)


def _number(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def _scan_geometry(model_el: ET.Element, raw_cells: list[_RawCell], outcome: ScanOutcome) -> Optional[GraphModel]:
    def err(code: str, location: str, message: str) -> None:
        outcome.issues.append(Issue(ERROR, code, "geometry", location, message))

    def warn(code: str, location: str, message: str) -> None:
        outcome.issues.append(Issue(WARNING, code, "geometry", location, message))

    model_kwargs: dict[str, int] = {}
    extra: dict[str, str] = {}
    for key, value in model_el.attrib.items():
        if key in MODEL_INT_ATTRS:
            try:
                parsed = int(round(_number(value)))
            except ValueError:
                err("E_BAD_GEOMETRY", "mxGraphModel", f"attribute {key}={value!r} is not numeric")
                continue
            model_kwargs[{"gridSize": "grid_size", "pageWidth": "page_width", "pageHeight": "page_height"}.get(key, key)] = parsed
        else:
            extra[key] = value

    cells: list[Cell] = []
    for raw in raw_cells[2:]:
        geometry: Optional[Geometry] = None
        if raw.geometry_el is not None:
            geometry = _read_geometry(raw, err)
        if geometry is not None and raw.kind in (CellKind.VERTEX, CellKind.GROUP):
            if geometry.width < 0 or geometry.height < 0:
                err("E_NONPOSITIVE_SIZE", raw.location, f"negative size {geometry.width}x{geometry.height}")
            elif raw.kind is CellKind.VERTEX and (geometry.width <= 0 or geometry.height <= 0):
                err("E_NONPOSITIVE_SIZE", raw.location, f"vertex size must be positive, got {geometry.width}x{geometry.height}")
            if geometry.waypoints:
                err("E_BAD_GEOMETRY", raw.location, "routing waypoints are only allowed on edges")
        known = {"id", "value", "style", "parent", "source", "target", "vertex", "edge"}
        cells.append(
            Cell(
                id=raw.id or "",
                kind=raw.kind or CellKind.VERTEX,
                value=raw.element.get("value", ""),
                style=raw.style,
                parent=raw.element.get("parent", DEFAULT_PARENT),
                source=raw.element.get("source"),
                target=raw.element.get("target"),
                geometry=geometry,
                extra={k: v for k, v in raw.element.attrib.items() if k not in known},
            )
        )

    if outcome.errors:
        return None

    model = GraphModel(cells=cells, extra=extra, **model_kwargs)
    _lint_layout(model, warn)
    return model


def _read_geometry(raw: _RawCell, err) -> Optional[Geometry]:
    el = raw.geometry_el
    assert el is not None
    values: dict[str, float] = {}
    ok = True
    for attr in ("x", "y", "width", "height"):
        text = el.get(attr)
        if text is None:
            values[attr] = 0.0
            continue
        try:
            values[attr] = _number(text)
        except ValueError:
            err("E_BAD_GEOMETRY", raw.location, f"geometry attribute {attr}={text!r} is not numeric")
            ok = False

    def read_point(point_el: ET.Element) -> Optional[Point]:
        try:
            return Point(_number(point_el.get("x", "0")), _number(point_el.get("y", "0")))
        except ValueError:
            err("E_BAD_GEOMETRY", raw.location, f"point coordinates ({point_el.get('x')!r}, {point_el.get('y')!r}) are not numeric")
            return None

    source_point = target_point = None
    waypoints: list[Point] = []
    for sub in el:
        if sub.tag == "mxPoint" and sub.get("as") == "sourcePoint":
            source_point = read_point(sub)
            ok = ok and source_point is not None
        elif sub.tag == "mxPoint" and sub.get("as") == "targetPoint":
            target_point = read_point(sub)
            ok = ok and target_point is not None
        elif sub.tag == "Array" and sub.get("as") == "points":
            for p in sub:
                if p.tag != "mxPoint":
                    continue
                point = read_point(p)
                if point is None:
                    ok = False
                else:
                    waypoints.append(point)
    if not ok:
        return None
    return Geometry(
        x=values["x"],
        y=values["y"],
        width=values["width"],
        height=values["height"],
        relative=el.get("relative") == "1",
        waypoints=tuple(waypoints),
        source_point=source_point,
        target_point=target_point,
    )


def _lint_layout(model: GraphModel, warn) -> None:
    boxes: list[tuple[Cell, float, float, float, float]] = []
    for cell in model.cells:
        if cell.kind is not CellKind.VERTEX or cell.geometry is None:
            continue
        x, y = model.absolute_origin(cell)
        boxes.append((cell, x, y, cell.geometry.width, cell.geometry.height))

    for i, (cell, x, y, w, h) in enumerate(boxes):
        if model.page_width > 0 and model.page_height > 0:
            if x < 0 or y < 0 or x + w > model.page_width or y + h > model.page_height:
                warn(
                    "W_OUT_OF_PAGE",
                    f"mxCell(id={cell.id})",
                    f"vertex extends outside the {model.page_width}x{model.page_height} page",
                )
        for other, ox, oy, ow, oh in boxes[i + 1 :]:
            if other.parent != cell.parent:
                continue
            if x < ox + ow and ox < x + w and y < oy + oh and oy < y + h:
                warn(
                    "W_OVERLAP",
                    f"mxCell(id={cell.id})",
                    f"vertex overlaps vertex \"{other.id}\"",
                )
