"""Complexity scoring: zero case, monotonicity, oracle counts, banding."""

import re

from dwt.complexity import (
    ComplexityProfile,
    classify,
    classify_scores,
    count_inputs,
    profile,
)
from dwt.mxgraph import parse_document, serialize_document
from dwt.mxgraph.model import Cell, CellKind, Geometry, GraphModel, StyleMap

from conftest import FIXTURES, random_document


def test_empty_model_scores_zero_easy() -> None:
    prof = profile(GraphModel())
    assert prof.scores == (0.0, 0.0, 0.0, 0.0, 0.0)
    assert prof.difficulty == "Easy"


def test_adding_edge_never_decreases_connection() -> None:
    doc = random_document(3, allow_negative=False)
    before = profile(doc.model).connection
    nodes = [c for c in doc.model.cells if c.kind is CellKind.VERTEX]
    doc.model.cells.append(
        Cell(id="extra-edge", kind=CellKind.EDGE, source=nodes[0].id, target=nodes[-1].id,
             geometry=Geometry(relative=True))
    )
    assert profile(doc.model).connection >= before


def test_raw_count_oracle_on_synthetic_fixture() -> None:
    # independent brute-force counts over the raw XML text
    doc = random_document(21, allow_negative=False)
    raw = serialize_document(doc)
    inputs = count_inputs(parse_document(raw).model)
    assert inputs.edge_count == len(re.findall(r'edge="1"', raw))
    assert inputs.vertex_count == len(re.findall(r'vertex="1"', raw))
    labels = re.findall(r'value="([^"]*)"', raw)
    import xml.sax.saxutils as sax
    texts = [sax.unescape(t, {"&quot;": '"'}) for t in labels if t]
    assert inputs.label_count == len(texts)
    assert inputs.label_length == sum(len(t) for t in texts)
    colors = set()
    for m in re.finditer(r'(?:fillColor|strokeColor|fontColor|gradientColor)=([^;"]+)', raw):
        if m.group(1) != "none":
            colors.add(m.group(1).lower())
    assert inputs.distinct_colors == len(colors)
    waypoints = len(re.findall(r"<mxPoint(?![^>]*as=)", raw))
    assert inputs.waypoint_count == waypoints


def test_distinct_color_never_decreases_color_score() -> None:
    doc = random_document(8, allow_negative=False)
    before = profile(doc.model).color
    vertex = next(c for c in doc.model.cells if c.kind is CellKind.VERTEX)
    vertex.style = StyleMap(
        token=vertex.style.token,
        entries=vertex.style.entries + (("fillColor", "#123456"),),
        trailing_semicolon=True,
    )
    assert profile(doc.model).color >= before


def test_appending_label_text_never_decreases_text_score() -> None:
    doc = random_document(9, allow_negative=False)
    before = profile(doc.model).text
    doc.model.cells[0].value += " and more words"
    assert profile(doc.model).text >= before


def test_scores_clamped_to_five() -> None:
    cells: list[Cell] = []
    for i in range(400):
        cells.append(Cell(id=f"n{i}", kind=CellKind.VERTEX, value="x" * 50,
                          geometry=Geometry(x=float(i), y=0, width=50, height=30)))
    for i in range(399):
        cells.append(Cell(id=f"e{i}", kind=CellKind.EDGE, source=f"n{i}", target=f"n{i+1}"))
    prof = profile(GraphModel(cells=cells))
    assert all(0.0 <= score <= 5.0 for score in prof.scores)


def test_classification_bands_and_boundaries() -> None:
    assert classify_scores((0, 0, 0, 0, 0)) == "Easy"
    assert classify_scores((2.5, 2.5, 2.5, 2.5, 2.5)) == "Medium"
    # both boundary values
    assert classify_scores((2.0, 2.0, 2.0, 2.0, 2.0)) == "Medium"
    assert classify_scores((3.5, 3.5, 3.5, 3.5, 3.5)) == "Hard"
    assert classify_scores((1.99, 2.0, 2.0, 2.0, 2.0)) == "Easy"  # mean 1.998
    assert classify_scores((3.4, 3.5, 3.5, 3.5, 3.5)) == "Medium"  # mean 3.48
    assert classify_scores((1.9, 1.9, 1.9, 1.9, 1.9)) == "Easy"


def test_hard_exemplar_scores_classify_hard() -> None:
    # consistently high scores across all five dimensions
    assert classify_scores((4.1, 4.3, 3.8, 3.9, 4.0)) == "Hard"


def test_classify_thresholds_configurable() -> None:
    prof = ComplexityProfile(2.5, 2.5, 2.5, 2.5, 2.5, difficulty="Medium")
    assert classify(prof, easy_below=3.0, hard_from=4.0) == "Easy"
    assert classify(prof, easy_below=1.0, hard_from=2.0) == "Hard"


def test_forty_five_edges_score_near_calibration_point() -> None:
    cells: list[Cell] = []
    for i in range(46):
        cells.append(Cell(id=f"n{i}", kind=CellKind.VERTEX,
                          geometry=Geometry(x=float(20 * i), y=0, width=10, height=10)))
    for i in range(45):
        cells.append(Cell(id=f"e{i}", kind=CellKind.EDGE, source=f"n{i}", target=f"n{i+1}"))
    prof = profile(GraphModel(cells=cells))
    assert abs(prof.connection - 4.1) < 0.1


def test_special_elements_counted() -> None:
    doc = parse_document((FIXTURES / "invalid" / "unknown_shape_token.xml").read_text())
    inputs = count_inputs(doc.model)
    assert inputs.special_count == 1
    assert profile(doc.model).special > 0
