"""Diagram-to-XML reconstruction toolkit.

Drives a multimodal model through perceptual analysis, layout planning,
and verifier-gated XML generation to rebuild rasterized diagrams as
editable draw.io files; ships the supporting parser, validity gate,
renderer, complexity analyzer, and benchmark harness.
"""

__version__ = "0.1.0"

from dwt.mxgraph import GraphDocument, GraphModel, build_document, parse_document, serialize_document
from dwt.verifier import Verdict, findings_to_feedback, verify

__all__ = [
    "GraphDocument",
    "GraphModel",
    "Verdict",
    "__version__",
    "build_document",
    "findings_to_feedback",
    "parse_document",
    "serialize_document",
    "verify",
]
