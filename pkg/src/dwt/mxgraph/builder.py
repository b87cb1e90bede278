"""Programmatic document assembly from node/edge specs.

This is the structured path the generation pipeline uses when a model
response arrives as separate parts (document meta, styles, nodes, layout,
edges) rather than one XML blob.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
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

#: mxfile attributes stamped on documents this package writes.
WRITER_FILE_ATTRS = {"host": "dwt", "version": "0.1.0", "type": "device"}


@dataclass
class StyleCatalog:
    """Reusable named styles (role -> parsed style string)."""

    roles: dict[str, StyleMap] = field(default_factory=dict)

    @classmethod
    def from_strings(cls, mapping: dict[str, str]) -> "StyleCatalog":
        return cls(roles={name: StyleMap.parse(text) for name, text in mapping.items()})

    def get(self, role: str) -> Optional[StyleMap]:
        return self.roles.get(role)

    def __contains__(self, role: str) -> bool:
        return role in self.roles


@dataclass
class NodeSpec:
    id: str
    label: str = ""
    x: float = 0.0
    y: float = 0.0
    width: float = 160.0
    height: float = 60.0
    style_role: Optional[str] = None
    style: Optional[StyleMap] = None
    group: bool = False
    parent: Optional[str] = None


@dataclass
class EdgeSpec:
    source: str
    target: str
    id: Optional[str] = None
    label: str = ""
    style_role: Optional[str] = None
    style: Optional[StyleMap] = None
    waypoints: tuple[Point, ...] = ()


class BuildErrorKind(Enum):
    DUPLICATE_ID = "DuplicateId"
    DANGLING_ENDPOINT = "DanglingEndpoint"
    MISSING_STYLE_ROLE = "MissingStyleRole"
    BAD_GEOMETRY = "BadGeometry"


class BuildError(ValueError):
    def __init__(self, kind: BuildErrorKind, message: str):
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind


def build_document(
    nodes: list[NodeSpec],
    edges: list[EdgeSpec],
    styles: Optional[StyleCatalog] = None,
    host_meta: Optional[HostMeta] = None,
) -> GraphDocument:
    """Assemble a valid document; ids are preserved from the specs."""
    catalog = styles or StyleCatalog()
    node_ids: set[str] = set()
    for node in nodes:
        if node.id in STRUCTURAL_IDS:
            raise BuildError(BuildErrorKind.DUPLICATE_ID, f"node id \"{node.id}\" is reserved")
        if node.id in node_ids:
            raise BuildError(BuildErrorKind.DUPLICATE_ID, f"node id \"{node.id}\" declared twice")
        node_ids.add(node.id)
        if node.width <= 0 or node.height <= 0:
            if not node.group or node.width < 0 or node.height < 0:
                raise BuildError(BuildErrorKind.BAD_GEOMETRY, f"node \"{node.id}\" size must be positive")

    cells: list[Cell] = []
    for node in _parents_first(nodes):
        style = _resolve_style(node.style, node.style_role, catalog, f"node \"{node.id}\"")
        if node.group:
            kind = CellKind.GROUP
            if style.token != "group":
                style = StyleMap(token="group", entries=style.entries, trailing_semicolon=True)
        else:
            kind = CellKind.VERTEX
        cells.append(
            Cell(
                id=node.id,
                kind=kind,
                value=node.label,
                style=style,
                parent=node.parent if node.parent is not None else DEFAULT_PARENT,
                geometry=Geometry(x=node.x, y=node.y, width=node.width, height=node.height),
            )
        )

    used_ids = set(node_ids) | set(STRUCTURAL_IDS)
    auto = 1
    for edge in edges:
        for side, ref in (("source", edge.source), ("target", edge.target)):
            if ref not in node_ids:
                raise BuildError(BuildErrorKind.DANGLING_ENDPOINT, f"edge {side} \"{ref}\" is not a declared node")
        if edge.id is not None:
            if edge.id in used_ids:
                raise BuildError(BuildErrorKind.DUPLICATE_ID, f"edge id \"{edge.id}\" already used")
            edge_id = edge.id
        else:
            while f"e{auto}" in used_ids:
                auto += 1
            edge_id = f"e{auto}"
        used_ids.add(edge_id)
        style = _resolve_style(edge.style, edge.style_role, catalog, f"edge \"{edge_id}\"")
        cells.append(
            Cell(
                id=edge_id,
                kind=CellKind.EDGE,
                value=edge.label,
                style=style,
                parent=DEFAULT_PARENT,
                source=edge.source,
                target=edge.target,
                geometry=Geometry(relative=True, waypoints=edge.waypoints),
            )
        )

    meta = host_meta or HostMeta(wrapped=True, file_attrs=dict(WRITER_FILE_ATTRS))
    return GraphDocument(host_meta=meta, model=GraphModel(cells=cells))


def _resolve_style(style: Optional[StyleMap], role: Optional[str], catalog: StyleCatalog, owner: str) -> StyleMap:
    if style is not None:
        return style
    if role is not None:
        resolved = catalog.get(role)
        if resolved is None:
            raise BuildError(BuildErrorKind.MISSING_STYLE_ROLE, f"{owner} references unknown style role \"{role}\"")
        return resolved
    return StyleMap(token=None, entries=(), trailing_semicolon=False)


def _parents_first(nodes: list[NodeSpec]) -> list[NodeSpec]:
    """Stable order with every group before its children."""
    by_id = {n.id: n for n in nodes}
    for node in nodes:
        if node.parent is not None and node.parent not in by_id:
            raise BuildError(BuildErrorKind.DANGLING_ENDPOINT, f"node \"{node.id}\" parent \"{node.parent}\" is not declared")

    ordered: list[NodeSpec] = []
    emitted: set[str] = set()
    in_progress: set[str] = set()

    def emit(node: NodeSpec) -> None:
        if node.id in emitted:
            return
        if node.id in in_progress:
            raise BuildError(BuildErrorKind.DANGLING_ENDPOINT, f"node \"{node.id}\" is part of a parent cycle")
        in_progress.add(node.id)
        if node.parent is not None:
            emit(by_id[node.parent])
        in_progress.discard(node.id)
        emitted.add(node.id)
        ordered.append(node)

    for node in nodes:
        emit(node)
    return ordered
