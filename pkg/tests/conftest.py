"""Shared fixtures: seeded random documents and tiny test images."""

from __future__ import annotations

import io
import random
from pathlib import Path

import pytest
from PIL import Image

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

FIXTURES = Path(__file__).parent / "fixtures"

WORDS = (
    "input", "output", "encoder", "decoder", "attention", "merge", "split",
    "queue", "cache", "filter", "router", "scale & crop", "x < y", 'say "hi"',
)
PALETTE = ("#DAE8FC", "#D5E8D4", "#FFE6CC", "#F8CECC", "#E1D5E7", "#FFF2CC")
STROKES = ("#6C8EBF", "#82B366", "#D79B00", "#B85450", "#9673A6")
PLAIN_SHAPES = ("rectangle", "rounded", "ellipse", "rhombus", "triangle", "hexagon", "cylinder", "parallelogram", "text")


def random_style(rng: random.Random, shape: str) -> StyleMap:
    entries: list[tuple[str, str]] = []
    token = None
    if shape == "rounded":
        entries.append(("rounded", "1"))
    elif shape != "rectangle":
        token = shape
    if rng.random() < 0.8:
        entries.append(("fillColor", rng.choice(PALETTE)))
    if rng.random() < 0.6:
        entries.append(("strokeColor", rng.choice(STROKES)))
    if rng.random() < 0.3:
        entries.append(("fontSize", str(rng.choice((10, 12, 14)))))
    if rng.random() < 0.2:
        entries.append(("dashed", "1"))
    return StyleMap(token=token, entries=tuple(entries), trailing_semicolon=True)


def random_document(
    seed: int,
    max_nodes: int = 10,
    allow_groups: bool = True,
    allow_negative: bool = True,
) -> GraphDocument:
    """Deterministic valid document: random vertices, optional group,
    edges between distinct vertices, occasional waypoints."""
    rng = random.Random(seed)
    cells: list[Cell] = []
    node_ids: list[str] = []

    n = rng.randint(1, max_nodes)
    base = -120 if (allow_negative and rng.random() < 0.2) else 0
    for i in range(n):
        shape = rng.choice(PLAIN_SHAPES)
        width = rng.choice((80, 120, 160, 200))
        height = rng.choice((40, 60, 80))
        x = base + rng.randrange(0, 720, 20)
        y = base + rng.randrange(0, 560, 20)
        node_id = f"n{i}"
        cells.append(
            Cell(
                id=node_id,
                kind=CellKind.VERTEX,
                value=rng.choice(WORDS) if rng.random() < 0.85 else "",
                style=random_style(rng, shape),
                geometry=Geometry(x=float(x), y=float(y), width=float(width), height=float(height)),
            )
        )
        node_ids.append(node_id)

    if allow_groups and n >= 2 and rng.random() < 0.3:
        group_id = "g0"
        cells.append(
            Cell(
                id=group_id,
                kind=CellKind.GROUP,
                style=StyleMap(token="group", entries=(), trailing_semicolon=True),
                geometry=Geometry(x=760.0, y=40.0, width=220.0, height=180.0),
            )
        )
        for j in range(rng.randint(1, 2)):
            child_id = f"gc{j}"
            cells.append(
                Cell(
                    id=child_id,
                    kind=CellKind.VERTEX,
                    value=rng.choice(WORDS),
                    style=random_style(rng, "rectangle"),
                    parent=group_id,
                    geometry=Geometry(x=20.0, y=20.0 + j * 80.0, width=120.0, height=50.0),
                )
            )
            node_ids.append(child_id)

    edge_count = rng.randint(0, max(0, len(node_ids) - 1) * 2)
    for k in range(edge_count):
        source, target = rng.sample(node_ids, 2) if len(node_ids) >= 2 else (None, None)
        if source is None:
            break
        waypoints = ()
        if rng.random() < 0.3:
            waypoints = tuple(
                Point(float(rng.randrange(0, 800, 10)), float(rng.randrange(0, 600, 10)))
                for _ in range(rng.randint(1, 3))
            )
        entries = []
        if rng.random() < 0.3:
            entries.append(("endArrow", "none"))
        if rng.random() < 0.3:
            entries.append(("strokeColor", rng.choice(STROKES)))
        cells.append(
            Cell(
                id=f"e{k}",
                kind=CellKind.EDGE,
                value=rng.choice(("", "", "yes", "no", "next")),
                style=StyleMap(token=None, entries=tuple(entries), trailing_semicolon=bool(entries)),
                source=source,
                target=target,
                geometry=Geometry(relative=True, waypoints=waypoints),
            )
        )

    meta = HostMeta(wrapped=rng.random() < 0.9, file_attrs={"host": "test", "version": "1.0"})
    if not meta.wrapped:
        meta = HostMeta(wrapped=False, file_attrs={}, diagram_name="", diagram_id="")
    return GraphDocument(host_meta=meta, model=GraphModel(cells=cells))


def make_png(width: int = 64, height: int = 48, color: str = "white") -> bytes:
    buffer = io.BytesIO()
    Image.new("RGB", (width, height), color).save(buffer, format="PNG")
    return buffer.getvalue()


@pytest.fixture
def tiny_png() -> bytes:
    return make_png()
