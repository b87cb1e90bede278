"""Deterministic realization of a layout plan as a graph document.

This is the fallback path when code generation never produces valid XML:
regions become left-to-right columns, elements stack inside their column,
alignment constraints equalize coordinates, and connect constraints become
edges. The output always passes the validity gate for cycle-free
constraint sets.
"""

from __future__ import annotations

from typing import Optional

from dwt.ir.types import AlignConstraint, Element, LayoutPlan
from dwt.mxgraph.builder import EdgeSpec, NodeSpec, StyleCatalog, build_document
from dwt.mxgraph.model import GraphDocument, StyleMap

NODE_WIDTH = 160.0
NODE_HEIGHT = 60.0
GAP = 40.0

#: default styles by element class when no style_role is given.
CLASS_STYLES = {
    "process": "rounded=1;whiteSpace=wrap;html=1;",
    "decision": "rhombus;whiteSpace=wrap;html=1;",
    "entity": "whiteSpace=wrap;html=1;",
    "datastore": "shape=cylinder;whiteSpace=wrap;html=1;",
    "annotation": "text;html=1;",
    "container": "dashed=1;whiteSpace=wrap;html=1;",
}
DEFAULT_STYLE = "whiteSpace=wrap;html=1;"


class UnsatisfiableConstraint(ValueError):
    def __init__(self, constraint: AlignConstraint, cycle: list[str]):
        chain = " = ".join(cycle)
        super().__init__(
            f"align({constraint.a}, {constraint.b}, {constraint.axis}) closes a cycle: {chain}"
        )
        self.constraint = constraint
        self.cycle = cycle


class _AlignGroups:
    """Union-find over element ids, one instance per axis."""

    def __init__(self) -> None:
        self.parent: dict[str, str] = {}
        self.edges: dict[str, list[str]] = {}

    def find(self, x: str) -> str:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, constraint: AlignConstraint) -> None:
        a, b = constraint.a, constraint.b
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            raise UnsatisfiableConstraint(constraint, self._chain(a, b))
        self.parent[rb] = ra
        self.edges.setdefault(a, []).append(b)
        self.edges.setdefault(b, []).append(a)

    def _chain(self, a: str, b: str) -> list[str]:
        # BFS over already-accepted align edges to show the redundant chain
        queue = [[a]]
        seen = {a}
        while queue:
            path = queue.pop(0)
            if path[-1] == b:
                return path + [a]
            for nxt in self.edges.get(path[-1], []):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(path + [nxt])
        return [a, b, a]

    def groups(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for member in self.parent:
            out.setdefault(self.find(member), []).append(member)
        return out


def plan_to_skeleton(plan: LayoutPlan, catalog: Optional[StyleCatalog] = None) -> GraphDocument:
    """Realize the plan as a verified-valid document."""
    styles = catalog if catalog is not None else plan.styles

    # column per declared region, in declaration order; unplaced elements
    # share one trailing implicit column
    column_of: dict[str, int] = {r.id: i for i, r in enumerate(plan.regions)}
    implicit = len(column_of)
    has_implicit = any(e.region is None for e in plan.elements)

    positions: dict[str, tuple[float, float]] = {}
    fill: dict[int, int] = {}
    for element in plan.elements:
        col = column_of[element.region] if element.region is not None else implicit
        row = fill.get(col, 0)
        fill[col] = row + 1
        positions[element.id] = (col * (NODE_WIDTH + GAP), row * (NODE_HEIGHT + GAP))
    del has_implicit

    # alignment: equalize the shared coordinate across each group, pinned to
    # the earliest-declared member's base position
    decl_index = {e.id: i for i, e in enumerate(plan.elements)}
    axes = {"horizontal": _AlignGroups(), "vertical": _AlignGroups()}
    for constraint in plan.aligns:
        axes[constraint.axis].union(constraint)
    for axis_name, groups in axes.items():
        for members in groups.groups().values():
            anchor = min(members, key=lambda m: decl_index[m])
            for member in members:
                x, y = positions[member]
                if axis_name == "horizontal":
                    positions[member] = (x, positions[anchor][1])
                else:
                    positions[member] = (positions[anchor][0], y)

    z_of = {c.element: c.z for c in plan.layers}
    order = sorted(plan.elements, key=lambda e: (z_of.get(e.id, 0), decl_index[e.id]))

    nodes = [
        NodeSpec(
            id=element.id,
            label=element.text,
            x=positions[element.id][0],
            y=positions[element.id][1],
            width=NODE_WIDTH,
            height=NODE_HEIGHT,
            style=_element_style(element, styles),
        )
        for element in order
    ]
    edges = [
        EdgeSpec(source=c.source, target=c.target, label=c.label)
        for c in plan.connects
    ]
    return build_document(nodes, edges, styles)


def _element_style(element: Element, styles: StyleCatalog) -> StyleMap:
    if element.style_role is not None:
        resolved = styles.get(element.style_role)
        if resolved is not None:
            return resolved
    class_key = element.class_label.lower()
    return StyleMap.parse(CLASS_STYLES.get(class_key, DEFAULT_STYLE))
