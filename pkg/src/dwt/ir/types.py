"""Value types for the two planning-stage representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from dwt.mxgraph.builder import StyleCatalog

SCHEMA_TAG = "dwt-ir/1"

GESTALT_PRINCIPLES = ("proximity", "similarity", "continuity", "closure")
VISUAL_VARIABLES = ("color", "size", "shape", "position", "texture")
ELEMENT_CLASSES = ("process", "decision", "entity", "datastore", "annotation", "container", "other")


class IrError(ValueError):
    pass


class NoStructuredBlock(IrError):
    def __init__(self, detail: str = "no parseable JSON block found in the response"):
        super().__init__(detail)


class SchemaViolation(IrError):
    def __init__(self, path: str, detail: str):
        super().__init__(f"at {path}: {detail}")
        self.path = path


class DanglingRef(IrError):
    def __init__(self, name: str, context: str = ""):
        detail = f"reference \"{name}\" names no declared object"
        if context:
            detail += f" ({context})"
        super().__init__(detail)
        self.name = name


class MissingRegion(IrError):
    def __init__(self, name: str, element_id: str):
        super().__init__(f"element \"{element_id}\" is placed in undeclared region \"{name}\"")
        self.name = name
        self.element_id = element_id


# ---------------------------------------------------------------------------
# perceptual report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HierarchyNode:
    id: str
    label: str = ""
    shape_hint: str = ""
    children: tuple["HierarchyNode", ...] = ()

    def walk(self) -> Iterator["HierarchyNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class GestaltGroup:
    members: tuple[str, ...]
    principle: str
    note: str = ""


@dataclass(frozen=True)
class Encoding:
    visual_variable: str
    semantic_role: str
    example: str = ""


@dataclass(frozen=True)
class Connector:
    source: str
    target: str
    directed: bool = True
    routing_hint: str = ""


@dataclass(frozen=True)
class PerceptReport:
    hierarchy: tuple[HierarchyNode, ...] = ()
    gestalt_groups: tuple[GestaltGroup, ...] = ()
    encodings: tuple[Encoding, ...] = ()
    connectors: tuple[Connector, ...] = ()

    def object_ids(self) -> set[str]:
        return {node.id for root in self.hierarchy for node in root.walk()}

    def to_json_dict(self) -> dict:
        def node_dict(node: HierarchyNode) -> dict:
            out: dict = {"id": node.id}
            if node.label:
                out["label"] = node.label
            if node.shape_hint:
                out["shape_hint"] = node.shape_hint
            if node.children:
                out["children"] = [node_dict(c) for c in node.children]
            return out

        return {
            "schema": SCHEMA_TAG,
            "kind": "percept",
            "hierarchy": [node_dict(n) for n in self.hierarchy],
            "gestalt_groups": [
                {"members": list(g.members), "principle": g.principle, **({"note": g.note} if g.note else {})}
                for g in self.gestalt_groups
            ],
            "encodings": [
                {
                    "visual_variable": e.visual_variable,
                    "semantic_role": e.semantic_role,
                    **({"example": e.example} if e.example else {}),
                }
                for e in self.encodings
            ],
            "connectors": [
                {
                    "from": c.source,
                    "to": c.target,
                    "directed": c.directed,
                    **({"routing_hint": c.routing_hint} if c.routing_hint else {}),
                }
                for c in self.connectors
            ],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "PerceptReport":
        def node_from(d: dict) -> HierarchyNode:
            return HierarchyNode(
                id=d["id"],
                label=d.get("label", ""),
                shape_hint=d.get("shape_hint", ""),
                children=tuple(node_from(c) for c in d.get("children", [])),
            )

        return cls(
            hierarchy=tuple(node_from(d) for d in payload.get("hierarchy", [])),
            gestalt_groups=tuple(
                GestaltGroup(tuple(g["members"]), g["principle"], g.get("note", ""))
                for g in payload.get("gestalt_groups", [])
            ),
            encodings=tuple(
                Encoding(e["visual_variable"], e["semantic_role"], e.get("example", ""))
                for e in payload.get("encodings", [])
            ),
            connectors=tuple(
                Connector(c["from"], c["to"], c.get("directed", True), c.get("routing_hint", ""))
                for c in payload.get("connectors", [])
            ),
        )


# ---------------------------------------------------------------------------
# layout plan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    id: str
    label: str = ""
    bounds_hint: str = ""


@dataclass(frozen=True)
class Element:
    id: str
    class_label: str
    text: str = ""
    region: Optional[str] = None
    style_role: Optional[str] = None


@dataclass(frozen=True)
class AlignConstraint:
    a: str
    b: str
    axis: str  # "horizontal" | "vertical"


@dataclass(frozen=True)
class ConnectConstraint:
    source: str
    target: str
    label: str = ""


@dataclass(frozen=True)
class LayerConstraint:
    element: str
    z: int


Constraint = Union[AlignConstraint, ConnectConstraint, LayerConstraint]


@dataclass
class LayoutPlan:
    regions: tuple[Region, ...] = ()
    elements: tuple[Element, ...] = ()
    constraints: tuple[Constraint, ...] = ()
    styles: StyleCatalog = field(default_factory=StyleCatalog)
    #: non-fatal notes from parsing (e.g. dropped connectors)
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def connects(self) -> tuple[ConnectConstraint, ...]:
        return tuple(c for c in self.constraints if isinstance(c, ConnectConstraint))

    @property
    def aligns(self) -> tuple[AlignConstraint, ...]:
        return tuple(c for c in self.constraints if isinstance(c, AlignConstraint))

    @property
    def layers(self) -> tuple[LayerConstraint, ...]:
        return tuple(c for c in self.constraints if isinstance(c, LayerConstraint))

    def to_json_dict(self) -> dict:
        constraints: list[dict] = []
        for c in self.constraints:
            if isinstance(c, AlignConstraint):
                constraints.append({"type": "align", "a": c.a, "b": c.b, "axis": c.axis})
            elif isinstance(c, ConnectConstraint):
                entry = {"type": "connect", "from": c.source, "to": c.target}
                if c.label:
                    entry["label"] = c.label
                constraints.append(entry)
            else:
                constraints.append({"type": "layer", "element": c.element, "z": c.z})
        return {
            "schema": SCHEMA_TAG,
            "kind": "plan",
            "regions": [
                {"id": r.id, **({"label": r.label} if r.label else {}), **({"bounds_hint": r.bounds_hint} if r.bounds_hint else {})}
                for r in self.regions
            ],
            "elements": [
                {
                    "id": e.id,
                    "class": e.class_label,
                    **({"text": e.text} if e.text else {}),
                    **({"region": e.region} if e.region is not None else {}),
                    **({"style_role": e.style_role} if e.style_role is not None else {}),
                }
                for e in self.elements
            ],
            "constraints": constraints,
            "styles": {name: style.to_string() for name, style in self.styles.roles.items()},
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "LayoutPlan":
        constraints: list[Constraint] = []
        for c in payload.get("constraints", []):
            if c["type"] == "align":
                constraints.append(AlignConstraint(c["a"], c["b"], c["axis"]))
            elif c["type"] == "connect":
                constraints.append(ConnectConstraint(c["from"], c["to"], c.get("label", "")))
            else:
                constraints.append(LayerConstraint(c["element"], int(c["z"])))
        return cls(
            regions=tuple(
                Region(r["id"], r.get("label", ""), r.get("bounds_hint", "")) for r in payload.get("regions", [])
            ),
            elements=tuple(
                Element(
                    e["id"],
                    e["class"],
                    e.get("text", ""),
                    e.get("region"),
                    e.get("style_role"),
                )
                for e in payload.get("elements", [])
            ),
            constraints=tuple(constraints),
            styles=StyleCatalog.from_strings(payload.get("styles", {})),
        )
