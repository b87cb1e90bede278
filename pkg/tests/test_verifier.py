"""The validity gate: taxonomy, layering, and feedback generation."""

import pytest

from dwt.mxgraph import build_document, serialize_document, NodeSpec, EdgeSpec
from dwt.mxgraph.scan import ERROR, WARNING
from dwt.verifier import (
    Finding,
    InvalidPrecondition,
    TAXONOMY,
    Verdict,
    findings_to_feedback,
    verify,
)

from conftest import FIXTURES, random_document

EXPECTED_CODES = {
    "unclosed_tag.xml": "E_UNCLOSED_TAG",
    "bad_nesting.xml": "E_BAD_NESTING",
    "duplicate_id.xml": "E_DUPLICATE_ID",
    "orphan_parent.xml": "E_ORPHAN_PARENT",
    "dangling_edge.xml": "E_DANGLING_EDGE",
    "negative_size.xml": "E_NONPOSITIVE_SIZE",
    "non_numeric_coordinate.xml": "E_BAD_GEOMETRY",
    "unknown_shape_token.xml": "E_UNKNOWN_SHAPE",
    "multiple_pages.xml": "E_MULTIPLE_PAGES",
    "unsupported_root.xml": "E_UNSUPPORTED_ROOT",
    "missing_root_cells.xml": "E_MISSING_ROOT_CELLS",
    "missing_geometry.xml": "E_MISSING_GEOMETRY",
}


def test_taxonomy_is_closed_and_documented() -> None:
    errors = [c for c, (sev, *_rest) in TAXONOMY.items() if sev == ERROR]
    warnings = [c for c, (sev, *_rest) in TAXONOMY.items() if sev == WARNING]
    assert len(errors) >= 8
    assert len(warnings) >= 4
    for code, (_sev, layer, summary, hint) in TAXONOMY.items():
        assert code.startswith(("E_", "W_"))
        assert layer in ("wellformed", "schema", "references", "geometry", "render")
        assert summary and hint


@pytest.mark.parametrize("fixture, code", sorted(EXPECTED_CODES.items()))
def test_invalid_fixture_yields_expected_code(fixture: str, code: str) -> None:
    verdict = verify((FIXTURES / "invalid" / fixture).read_text())
    assert verdict.status == "Invalid"
    error_codes = {f.code for f in verdict.errors}
    assert error_codes == {code}, f"{fixture}: {error_codes}"


def test_all_finding_codes_are_in_taxonomy() -> None:
    for fixture in (FIXTURES / "invalid").glob("*.xml"):
        for finding in verify(fixture.read_text()).findings:
            assert finding.code in TAXONOMY


def test_empty_document_valid_zero_findings() -> None:
    verdict = verify((FIXTURES / "valid" / "empty_canonical.xml").read_text())
    assert verdict.status == "Valid"
    assert verdict.findings == []


def test_valid_fixtures_have_no_error_findings() -> None:
    for fixture in (FIXTURES / "valid").glob("*.xml"):
        verdict = verify(fixture.read_text())
        assert verdict.status == "Valid", (fixture.name, [f.message for f in verdict.findings])


def test_wellformedness_failure_skips_deeper_layers() -> None:
    verdict = verify((FIXTURES / "invalid" / "unclosed_tag.xml").read_text())
    assert verdict.checked_layers == {
        "wellformed": "failed",
        "schema": "skipped",
        "references": "skipped",
        "geometry": "skipped",
        "render": "skipped",
    }


def test_dangling_edge_exactly_one_finding() -> None:
    verdict = verify((FIXTURES / "invalid" / "dangling_edge.xml").read_text())
    assert [f.code for f in verdict.findings] == ["E_DANGLING_EDGE"]
    assert verdict.checked_layers["geometry"] == "skipped"
    assert verdict.checked_layers["render"] == "skipped"


def test_determinism_on_identical_bytes() -> None:
    raw = (FIXTURES / "invalid" / "duplicate_id.xml").read_text()
    assert verify(raw) == verify(raw)


def test_agreement_with_builder() -> None:
    # documents assembled without error always pass the gate
    doc = build_document(
        [NodeSpec("a", "A", 0, 0), NodeSpec("b", "B", 200, 100), NodeSpec("c", "C", 400, 0)],
        [EdgeSpec("a", "b"), EdgeSpec("b", "c", label="ok")],
    )
    assert verify(serialize_document(doc)).is_valid


def test_soundness_over_random_corpus() -> None:
    from dwt.mxgraph import parse_document
    from dwt.render import render_svg

    for seed in range(30):
        doc = random_document(seed)
        text = serialize_document(doc)
        verdict = verify(text)
        assert verdict.is_valid, (seed, [f.message for f in verdict.findings])
        render_svg(parse_document(text).model)  # must not raise


def test_overlap_warning_does_not_block_validity() -> None:
    doc = build_document(
        [NodeSpec("a", "A", 0, 0, 100, 50), NodeSpec("b", "B", 40, 20, 100, 50)],
        [],
    )
    verdict = verify(serialize_document(doc))
    assert verdict.is_valid
    assert any(f.code == "W_OVERLAP" for f in verdict.warnings)


def test_zero_size_vertex_is_error() -> None:
    raw = (FIXTURES / "invalid" / "negative_size.xml").read_text().replace('width="-100"', 'width="0"')
    verdict = verify(raw)
    assert {f.code for f in verdict.errors} == {"E_NONPOSITIVE_SIZE"}


# -- feedback -----------------------------------------------------------------


def test_feedback_requires_invalid_verdict() -> None:
    with pytest.raises(InvalidPrecondition):
        findings_to_feedback(verify((FIXTURES / "valid" / "empty_canonical.xml").read_text()))


def test_feedback_names_edge_and_missing_target() -> None:
    verdict = verify((FIXTURES / "invalid" / "dangling_edge.xml").read_text())
    feedback = findings_to_feedback(verdict)
    assert "E_DANGLING_EDGE" in feedback
    assert "missing" in feedback  # the missing target id
    assert "id=e" in feedback  # the edge location


def test_feedback_caps_exemplars_at_ten() -> None:
    findings = [
        Finding(ERROR, "E_DANGLING_EDGE", f"mxCell[{i}]", f"target z{i} missing") for i in range(40)
    ]
    verdict = Verdict(status="Invalid", findings=findings)
    feedback = findings_to_feedback(verdict)
    assert feedback.count("- at mxCell[") == 10
    assert "(+30 more" in feedback


def test_feedback_orders_errors_before_warnings() -> None:
    findings = [
        Finding(WARNING, "W_OVERLAP", "mxCell[5]", "overlaps"),
        Finding(ERROR, "E_DUPLICATE_ID", "mxCell[3]", "dup"),
    ]
    feedback = findings_to_feedback(Verdict(status="Invalid", findings=findings))
    assert feedback.index("E_DUPLICATE_ID") < feedback.index("W_OVERLAP")


def test_feedback_deterministic() -> None:
    verdict = verify((FIXTURES / "invalid" / "duplicate_id.xml").read_text())
    assert findings_to_feedback(verdict) == findings_to_feedback(verdict)
