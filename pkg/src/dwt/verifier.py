"""Validity gate for candidate mxGraph XML.

``verify`` runs five layered checks (wellformedness, schema, references,
geometry, rendering) and reports machine-readable findings drawn from a
closed code taxonomy. ``findings_to_feedback`` turns an invalid verdict
into the bounded repair brief that the refinement loop feeds back to the
model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from dwt.mxgraph.scan import ERROR, LAYERS, WARNING, scan_text
from dwt.render.svg import RenderError, RenderErrorKind, RenderOptions, render_svg

#: closed finding taxonomy: code -> (severity, layer, summary, repair hint).
TAXONOMY: dict[str, tuple[str, str, str, str]] = {
    "E_UNCLOSED_TAG": (
        ERROR, "wellformed",
        "an element is opened but never closed (often a truncated response)",
        "close every open tag; emit the document to the final </mxfile> or </mxGraphModel>",
    ),
    "E_BAD_NESTING": (
        ERROR, "wellformed",
        "closing tags appear in the wrong order",
        "close inner elements before outer ones (mxGeometry inside mxCell inside root)",
    ),
    "E_NOT_WELLFORMED": (
        ERROR, "wellformed",
        "the text is not parseable XML",
        "escape reserved characters (& < >) in attribute values and emit exactly one root element",
    ),
    "E_UNSUPPORTED_ROOT": (
        ERROR, "schema",
        "the document root is not a single-page mxfile or mxGraphModel",
        "wrap the model as <mxfile><diagram><mxGraphModel>... with uncompressed content",
    ),
    "E_MULTIPLE_PAGES": (
        ERROR, "schema",
        "more than one diagram page is declared",
        "emit exactly one <diagram> element",
    ),
    "E_MISSING_ROOT_CELLS": (
        ERROR, "schema",
        "the two structural root cells are missing or malformed",
        "start the cell list with <mxCell id=\"0\"/> and <mxCell id=\"1\" parent=\"0\"/>",
    ),
    "E_MISSING_ID": (
        ERROR, "schema",
        "a cell has no id attribute",
        "give every mxCell a unique id",
    ),
    "E_BAD_CELL_KIND": (
        ERROR, "schema",
        "a cell is neither a plain vertex nor a plain edge",
        "flag each content cell with vertex=\"1\" or edge=\"1\" and keep only mxGeometry children",
    ),
    "E_MISSING_GEOMETRY": (
        ERROR, "schema",
        "a vertex has no mxGeometry element",
        "add <mxGeometry x=.. y=.. width=.. height=.. as=\"geometry\"/> to every vertex",
    ),
    "E_DUPLICATE_ID": (
        ERROR, "references",
        "two cells share an id (or reuse a structural id)",
        "rename one of the cells; ids 0 and 1 are reserved",
    ),
    "E_ORPHAN_PARENT": (
        ERROR, "references",
        "a cell's parent is missing, declared later, or not a container",
        "declare group cells before their children and parent content cells to \"1\" or a group id",
    ),
    "E_DANGLING_EDGE": (
        ERROR, "references",
        "an edge endpoint references no declared vertex, or the edge has no endpoints at all",
        "point source/target at declared vertex ids, or give the edge explicit endpoint points",
    ),
    "E_BAD_GEOMETRY": (
        ERROR, "geometry",
        "a coordinate or size is not a finite number",
        "write plain decimal numbers for x, y, width, height and waypoints",
    ),
    "E_NONPOSITIVE_SIZE": (
        ERROR, "geometry",
        "a vertex has zero/negative width or height",
        "give every vertex a positive width and height",
    ),
    "E_UNKNOWN_SHAPE": (
        ERROR, "render",
        "a style uses a shape token outside the supported set",
        "use one of: rectangle (default), rounded, ellipse, rhombus, triangle, hexagon, cylinder, parallelogram, text, group",
    ),
    "E_RENDER_FAILED": (
        ERROR, "render",
        "the model could not be drawn",
        "check edge routing: every edge needs a resolvable point on both sides",
    ),
    "W_DUPLICATE_STYLE_KEY": (
        WARNING, "schema",
        "a style string repeats a key; the last value wins",
        "emit each style key once",
    ),
    "W_FLOATING_EDGE": (
        WARNING, "references",
        "an edge is attached on only one side",
        "connect both ends, or add an explicit endpoint point for the free side",
    ),
    "W_OUT_OF_PAGE": (
        WARNING, "geometry",
        "a vertex extends outside the page bounds",
        "move or shrink the vertex, or enlarge pageWidth/pageHeight",
    ),
    "W_OVERLAP": (
        WARNING, "geometry",
        "two sibling vertices overlap",
        "adjust coordinates so boxes do not intersect",
    ),
}


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    location: str
    message: str


@dataclass
class Verdict:
    status: str  # "Valid" | "Invalid"
    findings: list[Finding] = field(default_factory=list)
    checked_layers: dict[str, str] = field(default_factory=dict)

    @property
    def is_valid(self) -> bool:
        return self.status == "Valid"

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == ERROR]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == WARNING]

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "findings": [
                {"severity": f.severity, "code": f.code, "location": f.location, "message": f.message}
                for f in self.findings
            ],
            "checked_layers": dict(self.checked_layers),
        }


def verify(xml_text: str) -> Verdict:
    """Total validity check; never raises, all failures become findings."""
    if isinstance(xml_text, bytes):
        try:
            xml_text = xml_text.decode("utf-8")
        except UnicodeDecodeError as exc:
            return Verdict(
                status="Invalid",
                findings=[Finding(ERROR, "E_NOT_WELLFORMED", f"byte {exc.start}", "input is not valid UTF-8")],
                checked_layers={"wellformed": "failed", **{l: "skipped" for l in LAYERS[1:]}},
            )
    outcome = scan_text(xml_text)
    findings = [Finding(i.severity, i.code, i.location, i.message) for i in outcome.issues]

    layers: dict[str, str] = {}
    reached_render = outcome.failed_layer is None
    for layer in LAYERS[:-1]:
        if layer in outcome.skipped_layers:
            layers[layer] = "skipped"
        elif layer == outcome.failed_layer:
            layers[layer] = "failed"
        else:
            layers[layer] = "passed"

    if reached_render:
        assert outcome.document is not None
        try:
            render_svg(outcome.document.model, RenderOptions())
            layers["render"] = "passed"
        except RenderError as exc:
            code = "E_UNKNOWN_SHAPE" if exc.kind is RenderErrorKind.UNKNOWN_SHAPE_TOKEN else "E_RENDER_FAILED"
            findings.append(Finding(ERROR, code, "render", str(exc)))
            layers["render"] = "failed"
    else:
        layers["render"] = "skipped"

    status = "Valid" if not any(f.severity == ERROR for f in findings) else "Invalid"
    return Verdict(status=status, findings=findings, checked_layers=layers)


class InvalidPrecondition(ValueError):
    pass


#: most exemplar lines shown per finding code in feedback.
FEEDBACK_EXEMPLAR_CAP = 10


def findings_to_feedback(verdict: Verdict) -> str:
    """Deterministic repair brief for the refinement prompt."""
    if verdict.is_valid:
        raise InvalidPrecondition("verdict is Valid; there is nothing to repair")

    groups: dict[str, list[Finding]] = {}
    for finding in verdict.findings:
        groups.setdefault(finding.code, []).append(finding)

    def group_key(code: str) -> tuple[int, str]:
        severity = TAXONOMY[code][0] if code in TAXONOMY else ERROR
        return (0 if severity == ERROR else 1, code)

    lines = [
        f"The XML failed validation with {len(verdict.errors)} error(s) and {len(verdict.warnings)} warning(s).",
        "Fix every error below, then re-emit the complete corrected document.",
    ]
    for code in sorted(groups, key=group_key):
        items = groups[code]
        _, _, summary, hint = TAXONOMY.get(code, (ERROR, "", code, ""))
        lines.append("")
        lines.append(f"[{code}] x{len(items)} - {summary}. Hint: {hint}.")
        for finding in items[:FEEDBACK_EXEMPLAR_CAP]:
            lines.append(f"  - at {finding.location}: {finding.message}")
        if len(items) > FEEDBACK_EXEMPLAR_CAP:
            lines.append(f"  (+{len(items) - FEEDBACK_EXEMPLAR_CAP} more of the same kind)")
    return "\n".join(lines)
