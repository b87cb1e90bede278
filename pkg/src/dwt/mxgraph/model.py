"""Value types for the supported mxGraph document subset.

The model covers single-page draw.io files: an optional ``mxfile`` wrapper,
one ``diagram``, one ``mxGraphModel``, and a flat-or-nested list of user
cells below the two structural root cells (ids "0" and "1"). Attributes
outside the typed subset ride along in per-object ``extra`` bags so a
parse → serialize round trip loses nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

#: ids of the two structural cells every mxGraphModel must declare first.
STRUCTURAL_IDS = ("0", "1")

#: default layer every user cell hangs off unless it names another parent.
DEFAULT_PARENT = "1"


class CellKind(Enum):
    VERTEX = "vertex"
    EDGE = "edge"
    GROUP = "group"


@dataclass(frozen=True)
class Point:
    x: float
    y: float


@dataclass(frozen=True)
class StyleMap:
    """Parsed form of a draw.io style string.

    ``token`` is the optional leading bare segment (e.g. ``ellipse``);
    ``entries`` keeps ``key=value`` pairs in their original order. Duplicate
    keys collapse to last-wins at parse time; the collapsed keys are kept in
    ``duplicate_keys`` for linting only and do not affect equality.
    """

    token: Optional[str] = None
    entries: tuple[tuple[str, str], ...] = ()
    trailing_semicolon: bool = True
    duplicate_keys: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        # an empty style has no textual form, so the flag must be canonical
        if self.token is None and not self.entries and self.trailing_semicolon:
            object.__setattr__(self, "trailing_semicolon", False)

    @classmethod
    def parse(cls, text: str) -> "StyleMap":
        if not text:
            return cls(token=None, entries=(), trailing_semicolon=False)
        trailing = text.endswith(";")
        segments = [s for s in text.split(";") if s != ""]
        token: Optional[str] = None
        order: list[str] = []
        values: dict[str, str] = {}
        duplicates: list[str] = []
        for i, seg in enumerate(segments):
            if "=" not in seg:
                if i == 0 and token is None:
                    token = seg
                else:
                    # bare flag in a later position; keep as key with empty value
                    if seg in values:
                        duplicates.append(seg)
                    else:
                        order.append(seg)
                    values[seg] = ""
                continue
            key, _, value = seg.partition("=")
            if key in values:
                duplicates.append(key)
            else:
                order.append(key)
            values[key] = value
        entries = tuple((k, values[k]) for k in order)
        return cls(
            token=token,
            entries=entries,
            trailing_semicolon=trailing,
            duplicate_keys=tuple(duplicates),
        )

    def to_string(self) -> str:
        parts: list[str] = []
        if self.token is not None:
            parts.append(self.token)
        for key, value in self.entries:
            parts.append(f"{key}={value}" if value != "" else key)
        if not parts:
            return ""
        text = ";".join(parts)
        return text + ";" if self.trailing_semicolon else text

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        for k, v in self.entries:
            if k == key:
                return v
        return default

    @property
    def base_shape(self) -> Optional[str]:
        """Shape token governing how the cell is drawn.

        Leading bare token wins; else an explicit ``shape=`` entry; else
        ``rounded=1`` selects the rounded rectangle. None means the default
        rectangle.
        """
        if self.token is not None:
            return self.token
        shape = self.get("shape")
        if shape:
            return shape
        if self.get("rounded") == "1":
            return "rounded"
        return None

    @property
    def is_empty(self) -> bool:
        return self.token is None and not self.entries


EMPTY_STYLE = StyleMap(token=None, entries=(), trailing_semicolon=False)


@dataclass(frozen=True)
class Geometry:
    """Position and size in page coordinates (origin top-left, y downward).

    ``waypoints`` are edge routing points; ``source_point``/``target_point``
    are explicit endpoints for edges not attached to a cell on that side.
    """

    x: float = 0.0
    y: float = 0.0
    width: float = 0.0
    height: float = 0.0
    relative: bool = False
    waypoints: tuple[Point, ...] = ()
    source_point: Optional[Point] = None
    target_point: Optional[Point] = None


@dataclass
class Cell:
    id: str
    kind: CellKind
    value: str = ""
    style: StyleMap = EMPTY_STYLE
    parent: str = DEFAULT_PARENT
    source: Optional[str] = None
    target: Optional[str] = None
    geometry: Optional[Geometry] = None
    extra: dict[str, str] = field(default_factory=dict)

    @property
    def is_vertex_like(self) -> bool:
        return self.kind in (CellKind.VERTEX, CellKind.GROUP)


@dataclass
class HostMeta:
    """Document-level attributes: the mxfile wrapper and the single page."""

    wrapped: bool = True
    file_attrs: dict[str, str] = field(default_factory=dict)
    diagram_name: str = "Page-1"
    diagram_id: str = "page-1"
    diagram_attrs: dict[str, str] = field(default_factory=dict)

    @property
    def version(self) -> Optional[str]:
        return self.file_attrs.get("version")


@dataclass
class GraphModel:
    """The cell list plus the grid/page attributes of mxGraphModel.

    ``cells`` holds user cells only, in document order; the structural root
    cells "0" and "1" are implicit (the serializer always emits them, the
    parser requires them).
    """

    cells: list[Cell] = field(default_factory=list)
    dx: int = 800
    dy: int = 600
    grid_size: int = 10
    page_width: int = 850
    page_height: int = 1100
    extra: dict[str, str] = field(default_factory=dict)

    @property
    def vertex_count(self) -> int:
        return sum(1 for c in self.cells if c.kind is CellKind.VERTEX)

    @property
    def edge_count(self) -> int:
        return sum(1 for c in self.cells if c.kind is CellKind.EDGE)

    def cell_by_id(self, cell_id: str) -> Optional[Cell]:
        for c in self.cells:
            if c.id == cell_id:
                return c
        return None

    def iter_kind(self, kind: CellKind) -> Iterator[Cell]:
        return (c for c in self.cells if c.kind is kind)

    def absolute_origin(self, cell: Cell) -> tuple[float, float]:
        """Top-left of ``cell`` in page coordinates.

        Child geometry is relative to the owning group, so ancestor offsets
        accumulate up to the default layer.
        """
        x = cell.geometry.x if cell.geometry else 0.0
        y = cell.geometry.y if cell.geometry else 0.0
        parent_id = cell.parent
        seen = set()
        while parent_id not in STRUCTURAL_IDS and parent_id not in seen:
            seen.add(parent_id)
            parent = self.cell_by_id(parent_id)
            if parent is None:
                break
            if parent.geometry is not None:
                x += parent.geometry.x
                y += parent.geometry.y
            parent_id = parent.parent
        return x, y


@dataclass
class GraphDocument:
    host_meta: HostMeta = field(default_factory=HostMeta)
    model: GraphModel = field(default_factory=GraphModel)


def format_number(value: float) -> str:
    """Canonical attribute form: integral floats print without the decimal."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)
