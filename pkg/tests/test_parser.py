"""Parsing of mxGraph XML into the typed document model."""

import re

import pytest

from dwt.mxgraph import ParseError, ParseErrorKind, parse_document
from dwt.mxgraph.model import CellKind

from conftest import FIXTURES


def test_minimal_document_has_zero_user_cells() -> None:
    doc = parse_document((FIXTURES / "valid" / "empty_canonical.xml").read_text())
    assert doc.model.cells == []
    assert doc.model.vertex_count == 0
    assert doc.model.edge_count == 0


def test_three_boxes_two_arrows_counts_match_regex_scan() -> None:
    raw = (FIXTURES / "three_boxes_two_arrows.xml").read_text()
    doc = parse_document(raw)
    # independent text-level oracle over the raw XML
    assert doc.model.vertex_count == len(re.findall(r'vertex="1"', raw)) == 3
    assert doc.model.edge_count == len(re.findall(r'edge="1"', raw)) == 2


def test_truncated_input_is_not_wellformed() -> None:
    with pytest.raises(ParseError) as excinfo:
        parse_document("<mxfile><diagram>")
    assert excinfo.value.kind is ParseErrorKind.NOT_WELLFORMED


def test_document_order_preserved() -> None:
    doc = parse_document((FIXTURES / "three_boxes_two_arrows.xml").read_text())
    assert [c.id for c in doc.model.cells] == ["load", "train", "eval", "a1", "a2"]


def test_unknown_attributes_pass_through() -> None:
    raw = (FIXTURES / "valid" / "group_nesting.xml").read_text()
    doc = parse_document(raw)
    group = doc.model.cell_by_id("grp")
    assert group is not None
    assert group.kind is CellKind.GROUP
    assert group.extra.get("connectable") == "0"


def test_standalone_model_root() -> None:
    doc = parse_document((FIXTURES / "valid" / "standalone_model.xml").read_text())
    assert doc.host_meta.wrapped is False
    assert doc.model.vertex_count == 1


def test_escaped_values_are_unescaped() -> None:
    doc = parse_document((FIXTURES / "valid" / "labels_and_escapes.xml").read_text())
    assert doc.model.cell_by_id("q").value == "x < 3 && y > 2"
    assert doc.model.cell_by_id("msg").value == 'she said "go"'


def test_explicit_endpoint_points_parsed() -> None:
    doc = parse_document((FIXTURES / "valid" / "waypoints_and_points.xml").read_text())
    floating = doc.model.cell_by_id("floating")
    assert floating.geometry.source_point is not None
    assert floating.geometry.target_point.x == 620
    bend = doc.model.cell_by_id("bend")
    assert len(bend.geometry.waypoints) == 1


@pytest.mark.parametrize(
    "fixture, kind",
    [
        ("duplicate_id.xml", ParseErrorKind.DUPLICATE_ID),
        ("orphan_parent.xml", ParseErrorKind.ORPHAN_PARENT),
        ("dangling_edge.xml", ParseErrorKind.DANGLING_ENDPOINT),
        ("negative_size.xml", ParseErrorKind.BAD_GEOMETRY),
        ("non_numeric_coordinate.xml", ParseErrorKind.BAD_GEOMETRY),
        ("missing_geometry.xml", ParseErrorKind.BAD_GEOMETRY),
        ("unsupported_root.xml", ParseErrorKind.UNSUPPORTED_ROOT),
        ("multiple_pages.xml", ParseErrorKind.UNSUPPORTED_ROOT),
        ("missing_root_cells.xml", ParseErrorKind.UNSUPPORTED_ROOT),
        ("bad_nesting.xml", ParseErrorKind.NOT_WELLFORMED),
    ],
)
def test_error_kinds(fixture: str, kind: ParseErrorKind) -> None:
    raw = (FIXTURES / "invalid" / fixture).read_text()
    with pytest.raises(ParseError) as excinfo:
        parse_document(raw)
    assert excinfo.value.kind is kind
    assert excinfo.value.location  # carries an element path or position


def test_unknown_shape_parses_but_is_kept_verbatim() -> None:
    # shape vocabulary is the renderer's concern, not the parser's
    doc = parse_document((FIXTURES / "invalid" / "unknown_shape_token.xml").read_text())
    assert doc.model.cells[0].style.base_shape == "mxgraph.azure.cloud"


def test_bytes_input_decoded_as_utf8() -> None:
    raw = (FIXTURES / "valid" / "empty_canonical.xml").read_bytes()
    assert parse_document(raw).model.cells == []


def test_forward_parent_reference_rejected() -> None:
    raw = """<mxGraphModel><root>
      <mxCell id="0"/><mxCell id="1" parent="0"/>
      <mxCell id="child" parent="late" vertex="1"><mxGeometry x="0" y="0" width="10" height="10" as="geometry"/></mxCell>
      <mxCell id="late" style="group;" parent="1" vertex="1"><mxGeometry x="0" y="0" width="50" height="50" as="geometry"/></mxCell>
    </root></mxGraphModel>"""
    with pytest.raises(ParseError) as excinfo:
        parse_document(raw)
    assert excinfo.value.kind is ParseErrorKind.ORPHAN_PARENT
