"""Programmatic document assembly."""

import pytest

from dwt.mxgraph import (
    BuildError,
    EdgeSpec,
    NodeSpec,
    StyleCatalog,
    build_document,
    serialize_document,
)
from dwt.verifier import verify


def test_empty_build_is_valid() -> None:
    doc = build_document([], [], StyleCatalog())
    assert doc.model.cells == []
    assert verify(serialize_document(doc)).is_valid


def test_two_nodes_one_edge_passes_verifier() -> None:
    doc = build_document(
        [NodeSpec("a", "A", 0, 0), NodeSpec("b", "B", 300, 0)],
        [EdgeSpec("a", "b")],
    )
    verdict = verify(serialize_document(doc))
    assert verdict.is_valid, [f.message for f in verdict.findings]
    assert doc.model.edge_count == 1


def test_ids_preserved_from_specs() -> None:
    doc = build_document([NodeSpec("keep-me", "X", 0, 0)], [])
    assert doc.model.cells[0].id == "keep-me"


def test_dangling_endpoint_rejected() -> None:
    with pytest.raises(BuildError, match="DanglingEndpoint"):
        build_document([NodeSpec("a", "A", 0, 0)], [EdgeSpec("a", "Z")])


def test_duplicate_node_id_rejected() -> None:
    with pytest.raises(BuildError, match="DuplicateId"):
        build_document([NodeSpec("a"), NodeSpec("a")], [])


def test_reserved_id_rejected() -> None:
    with pytest.raises(BuildError, match="DuplicateId"):
        build_document([NodeSpec("0")], [])


def test_style_roles_resolved_from_catalog() -> None:
    catalog = StyleCatalog.from_strings({"module": "rounded=1;fillColor=#DAE8FC;"})
    doc = build_document([NodeSpec("a", style_role="module")], [], catalog)
    assert doc.model.cells[0].style.get("fillColor") == "#DAE8FC"


def test_missing_style_role_rejected() -> None:
    with pytest.raises(BuildError, match="MissingStyleRole"):
        build_document([NodeSpec("a", style_role="ghost")], [])


def test_group_children_emitted_after_parent() -> None:
    doc = build_document(
        [NodeSpec("child", parent="box", width=80, height=40), NodeSpec("box", group=True, width=300, height=200)],
        [],
    )
    ids = [c.id for c in doc.model.cells]
    assert ids.index("box") < ids.index("child")
    assert verify(serialize_document(doc)).is_valid


def test_parent_cycle_rejected() -> None:
    with pytest.raises(BuildError, match="cycle"):
        build_document(
            [NodeSpec("a", parent="b", group=True), NodeSpec("b", parent="a", group=True)],
            [],
        )


def test_edge_ids_autogenerated_without_collisions() -> None:
    doc = build_document(
        [NodeSpec("a"), NodeSpec("b"), NodeSpec("e1")],
        [EdgeSpec("a", "b"), EdgeSpec("b", "a")],
    )
    ids = [c.id for c in doc.model.cells]
    assert len(ids) == len(set(ids))
