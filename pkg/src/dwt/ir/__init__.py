"""Intermediate representations produced by the planning stage.

Two JSON documents flow between the two planning phases and on to code
generation: the perceptual report (grouping, hierarchy, encodings,
connectors) and the layout plan (regions, element catalog, constraints).
Both carry the versioned ``dwt-ir/1`` schema tag and serialize to
``<stem>.percept.json`` / ``<stem>.plan.json`` trace files.
"""

from dwt.ir.types import (
    AlignConstraint,
    ConnectConstraint,
    Connector,
    DanglingRef,
    Element,
    Encoding,
    GestaltGroup,
    HierarchyNode,
    IrError,
    LayerConstraint,
    LayoutPlan,
    MissingRegion,
    NoStructuredBlock,
    PerceptReport,
    Region,
    SchemaViolation,
)
from dwt.ir.parsing import extract_json_block, parse_layout_response, parse_percept_response
from dwt.ir.skeleton import UnsatisfiableConstraint, plan_to_skeleton
from dwt.mxgraph.builder import StyleCatalog

__all__ = [
    "AlignConstraint",
    "ConnectConstraint",
    "Connector",
    "DanglingRef",
    "Element",
    "Encoding",
    "GestaltGroup",
    "HierarchyNode",
    "IrError",
    "LayerConstraint",
    "LayoutPlan",
    "MissingRegion",
    "NoStructuredBlock",
    "PerceptReport",
    "Region",
    "SchemaViolation",
    "StyleCatalog",
    "UnsatisfiableConstraint",
    "extract_json_block",
    "parse_layout_response",
    "parse_percept_response",
    "plan_to_skeleton",
]
