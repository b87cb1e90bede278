"""IR parsing, reference integrity, and skeleton realization."""

import json
import random

import pytest

from dwt.ir import (
    DanglingRef,
    MissingRegion,
    NoStructuredBlock,
    SchemaViolation,
    UnsatisfiableConstraint,
    parse_layout_response,
    parse_percept_response,
    plan_to_skeleton,
)
from dwt.mxgraph import serialize_document
from dwt.verifier import verify


def percept_payload(**overrides) -> dict:
    payload = {
        "schema": "dwt-ir/1",
        "kind": "percept",
        "hierarchy": [
            {"id": "n1", "label": "Input", "children": [{"id": "n1a", "label": "file"}]},
            {"id": "n2", "label": "Model"},
        ],
        "gestalt_groups": [{"members": ["n1", "n2"], "principle": "proximity"}],
        "encodings": [{"visual_variable": "color", "semantic_role": "stage"}],
        "connectors": [{"from": "n1", "to": "n2", "directed": True}],
    }
    payload.update(overrides)
    return payload


def plan_payload(**overrides) -> dict:
    payload = {
        "schema": "dwt-ir/1",
        "kind": "plan",
        "regions": [{"id": "rin", "label": "Input"}, {"id": "rout", "label": "Output"}],
        "elements": [
            {"id": "a", "class": "process", "text": "Input", "region": "rin"},
            {"id": "b", "class": "process", "text": "Model", "region": "rout"},
        ],
        "constraints": [{"type": "connect", "from": "a", "to": "b"}],
        "styles": {},
    }
    payload.update(overrides)
    return payload


def fenced(payload: dict) -> str:
    return f"Some prose.\n```json\n{json.dumps(payload, indent=1)}\n```\nMore prose."


def test_percept_single_group_over_two_objects() -> None:
    report = parse_percept_response(fenced(percept_payload()))
    assert len(report.gestalt_groups) == 1
    assert report.object_ids() == {"n1", "n1a", "n2"}


def test_percept_dangling_group_member() -> None:
    bad = percept_payload(gestalt_groups=[{"members": ["n7"], "principle": "closure"}])
    with pytest.raises(DanglingRef) as excinfo:
        parse_percept_response(fenced(bad))
    assert excinfo.value.name == "n7"


def test_percept_invalid_principle_is_schema_violation() -> None:
    bad = percept_payload(gestalt_groups=[{"members": ["n1"], "principle": "symmetry"}])
    with pytest.raises(SchemaViolation):
        parse_percept_response(fenced(bad))


def test_percept_no_block() -> None:
    with pytest.raises(NoStructuredBlock):
        parse_percept_response("I could not analyze this image, sorry.")


def test_randomized_prose_padding_corpus() -> None:
    # 20 synthetic responses with random prose around a valid block
    rng = random.Random(99)
    fillers = ["Sure!", "Let me think about this step by step.", "Here is the result:",
               "```\nnot json\n```", "Analysis complete.", "“quotes” and emoji 🎨"]
    for i in range(20):
        payload = percept_payload()
        before = " ".join(rng.choices(fillers, k=rng.randint(0, 4)))
        after = " ".join(rng.choices(fillers, k=rng.randint(0, 4)))
        text = f"{before}\n```json\n{json.dumps(payload)}\n```\n{after}"
        report = parse_percept_response(text)
        assert report.object_ids() == {"n1", "n1a", "n2"}, f"case {i}"


def test_plan_basic_valid() -> None:
    plan = parse_layout_response(fenced(plan_payload()))
    assert len(plan.elements) == 2
    assert len(plan.connects) == 1


def test_plan_align_dangling_operand() -> None:
    bad = plan_payload(constraints=[{"type": "align", "a": "a", "b": "e9", "axis": "horizontal"}])
    with pytest.raises(DanglingRef) as excinfo:
        parse_layout_response(fenced(bad))
    assert excinfo.value.name == "e9"


def test_plan_missing_region() -> None:
    bad = plan_payload(elements=[{"id": "a", "class": "process", "region": "nowhere"}])
    with pytest.raises(MissingRegion):
        parse_layout_response(fenced(bad))


def test_plan_missing_style_role() -> None:
    bad = plan_payload(elements=[{"id": "a", "class": "process", "style_role": "ghost"}])
    with pytest.raises(DanglingRef):
        parse_layout_response(fenced(bad))


def test_dropped_connector_warnings_by_set_difference() -> None:
    report = parse_percept_response(fenced(percept_payload(
        connectors=[{"from": "n1", "to": "n2"}, {"from": "n2", "to": "n1"}, {"from": "n1", "to": "n1a"}]
    )))
    plan = parse_layout_response(fenced(plan_payload(
        elements=[
            {"id": "n1", "class": "process"}, {"id": "n2", "class": "process"}, {"id": "n1a", "class": "entity"},
        ],
        constraints=[{"type": "connect", "from": "n1", "to": "n2"}, {"type": "connect", "from": "n2", "to": "n1"}],
    )), context=report)
    assert len(plan.warnings) == 1
    assert "n1 -> n1a" in plan.warnings[0]


def test_undirected_connector_matches_either_orientation() -> None:
    report = parse_percept_response(fenced(percept_payload(
        connectors=[{"from": "n2", "to": "n1", "directed": False}]
    )))
    plan = parse_layout_response(fenced(plan_payload(
        elements=[{"id": "n1", "class": "process"}, {"id": "n2", "class": "process"}],
        constraints=[{"type": "connect", "from": "n1", "to": "n2"}],
    )), context=report)
    assert plan.warnings == ()


# -- skeleton -----------------------------------------------------------------


def test_single_element_at_origin_default_size() -> None:
    plan = parse_layout_response(fenced(plan_payload(
        regions=[], elements=[{"id": "only", "class": "process", "text": "X"}], constraints=[],
    )))
    doc = plan_to_skeleton(plan)
    cell = doc.model.cells[0]
    assert (cell.geometry.x, cell.geometry.y) == (0.0, 0.0)
    assert (cell.geometry.width, cell.geometry.height) == (160.0, 60.0)
    assert verify(serialize_document(doc)).is_valid


def test_align_horizontal_equalizes_y() -> None:
    plan = parse_layout_response(fenced(plan_payload(
        constraints=[{"type": "align", "a": "a", "b": "b", "axis": "horizontal"},
                     {"type": "connect", "from": "a", "to": "b"}],
    )))
    doc = plan_to_skeleton(plan)
    a = doc.model.cell_by_id("a").geometry
    b = doc.model.cell_by_id("b").geometry
    assert a.y == b.y
    assert a.x != b.x  # different regions keep different columns


def test_align_vertical_equalizes_x() -> None:
    plan = parse_layout_response(fenced(plan_payload(
        constraints=[{"type": "align", "a": "a", "b": "b", "axis": "vertical"}],
    )))
    doc = plan_to_skeleton(plan)
    assert doc.model.cell_by_id("a").geometry.x == doc.model.cell_by_id("b").geometry.x


def test_four_elements_three_connects_verifies() -> None:
    plan = parse_layout_response(fenced(plan_payload(
        elements=[
            {"id": "a", "class": "process", "region": "rin"},
            {"id": "b", "class": "decision", "region": "rin"},
            {"id": "c", "class": "entity", "region": "rout"},
            {"id": "d", "class": "datastore", "region": "rout"},
        ],
        constraints=[
            {"type": "connect", "from": "a", "to": "b"},
            {"type": "connect", "from": "b", "to": "c"},
            {"type": "connect", "from": "c", "to": "d", "label": "store"},
            {"type": "align", "a": "a", "b": "c", "axis": "horizontal"},
        ],
    )))
    doc = plan_to_skeleton(plan)
    assert verify(serialize_document(doc)).is_valid
    assert doc.model.edge_count == 3


def test_connect_multiset_preserved() -> None:
    plan = parse_layout_response(fenced(plan_payload(
        constraints=[{"type": "connect", "from": "a", "to": "b"},
                     {"type": "connect", "from": "a", "to": "b"}],
    )))
    doc = plan_to_skeleton(plan)
    edges = [(c.source, c.target) for c in doc.model.cells if c.source is not None]
    assert edges == [("a", "b"), ("a", "b")]


def test_layer_constraint_orders_cells() -> None:
    plan = parse_layout_response(fenced(plan_payload(
        constraints=[{"type": "layer", "element": "a", "z": 5}],
    )))
    doc = plan_to_skeleton(plan)
    ids = [c.id for c in doc.model.cells if c.kind.value != "edge"]
    assert ids == ["b", "a"]  # higher z drawn later


def test_align_cycle_raises_with_cycle() -> None:
    plan = parse_layout_response(fenced(plan_payload(
        elements=[{"id": x, "class": "process"} for x in ("a", "b", "c")],
        constraints=[
            {"type": "align", "a": "a", "b": "b", "axis": "horizontal"},
            {"type": "align", "a": "b", "b": "c", "axis": "horizontal"},
            {"type": "align", "a": "c", "b": "a", "axis": "horizontal"},
        ],
    )))
    with pytest.raises(UnsatisfiableConstraint) as excinfo:
        plan_to_skeleton(plan)
    assert set(excinfo.value.cycle) >= {"a", "c"}


def test_class_styles_applied() -> None:
    plan = parse_layout_response(fenced(plan_payload(
        elements=[{"id": "d1", "class": "decision"}, {"id": "s1", "class": "datastore"}],
        constraints=[],
    )))
    doc = plan_to_skeleton(plan)
    assert doc.model.cell_by_id("d1").style.base_shape == "rhombus"
    assert doc.model.cell_by_id("s1").style.base_shape == "cylinder"
