"""Strict parsing of mxGraph XML text into :class:`GraphDocument`."""

from __future__ import annotations

from enum import Enum

from dwt.mxgraph.model import GraphDocument
from dwt.mxgraph.scan import scan_text


class ParseErrorKind(Enum):
    NOT_WELLFORMED = "NotWellFormed"
    UNSUPPORTED_ROOT = "UnsupportedRoot"
    UNSUPPORTED_CELL = "UnsupportedCell"
    DUPLICATE_ID = "DuplicateId"
    ORPHAN_PARENT = "OrphanParent"
    DANGLING_ENDPOINT = "DanglingEndpoint"
    BAD_GEOMETRY = "BadGeometry"


_CODE_TO_KIND = {
    "E_UNCLOSED_TAG": ParseErrorKind.NOT_WELLFORMED,
    "E_BAD_NESTING": ParseErrorKind.NOT_WELLFORMED,
    "E_NOT_WELLFORMED": ParseErrorKind.NOT_WELLFORMED,
    "E_UNSUPPORTED_ROOT": ParseErrorKind.UNSUPPORTED_ROOT,
    "E_MULTIPLE_PAGES": ParseErrorKind.UNSUPPORTED_ROOT,
    "E_MISSING_ROOT_CELLS": ParseErrorKind.UNSUPPORTED_ROOT,
    "E_MISSING_ID": ParseErrorKind.UNSUPPORTED_CELL,
    "E_BAD_CELL_KIND": ParseErrorKind.UNSUPPORTED_CELL,
    "E_DUPLICATE_ID": ParseErrorKind.DUPLICATE_ID,
    "E_ORPHAN_PARENT": ParseErrorKind.ORPHAN_PARENT,
    "E_DANGLING_EDGE": ParseErrorKind.DANGLING_ENDPOINT,
    "E_MISSING_GEOMETRY": ParseErrorKind.BAD_GEOMETRY,
    "E_BAD_GEOMETRY": ParseErrorKind.BAD_GEOMETRY,
    "E_NONPOSITIVE_SIZE": ParseErrorKind.BAD_GEOMETRY,
}


class ParseError(ValueError):
    """Raised when xml_text is outside the supported document subset.

    Carries the first failure found by the layered scan; ``location`` is an
    element path (or line/column for syntax errors).
    """

    def __init__(self, kind: ParseErrorKind, location: str, message: str):
        super().__init__(f"{kind.value} at {location}: {message}")
        self.kind = kind
        self.location = location
        self.detail = message


def parse_document(xml_text: str) -> GraphDocument:
    """Parse XML text into a typed document, or raise :class:`ParseError`.

    The returned document preserves cell order and unknown attributes, so
    serializing it back loses nothing.
    """
    if isinstance(xml_text, bytes):
        xml_text = xml_text.decode("utf-8")
    outcome = scan_text(xml_text)
    errors = outcome.errors
    if errors:
        first = errors[0]
        raise ParseError(_CODE_TO_KIND[first.code], first.location, first.message)
    assert outcome.document is not None
    return outcome.document
