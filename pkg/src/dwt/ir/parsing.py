"""Extraction and validation of planning-stage responses.

Model responses typically wrap the structured payload in a fenced code
block surrounded by prose; these parsers pull out the first block that is
valid JSON, check it against the shipped schema, and enforce referential
integrity before handing back a typed object.
"""

from __future__ import annotations

import json
import re
from typing import Optional

import jsonschema

from dwt.ir.types import (
    Connector,
    DanglingRef,
    LayoutPlan,
    MissingRegion,
    NoStructuredBlock,
    PerceptReport,
    SchemaViolation,
)
from dwt.schema_registry import validator_for

_FENCE = re.compile(r"```[a-zA-Z0-9_-]*\s*\n(.*?)```", re.DOTALL)


def extract_json_block(model_text: str) -> dict:
    """First fenced block (or the whole text) that parses as a JSON object."""
    candidates = [m.group(1) for m in _FENCE.finditer(model_text)]
    candidates.append(model_text)
    for candidate in candidates:
        try:
            payload = json.loads(candidate.strip())
        except json.JSONDecodeError:
            continue
        if isinstance(payload, dict):
            return payload
    raise NoStructuredBlock()


def _validate_schema(name: str, payload: dict) -> None:
    validator = validator_for(name)
    error = jsonschema.exceptions.best_match(validator.iter_errors(payload))
    if error is not None:
        raise SchemaViolation(error.json_path, error.message)


def parse_percept_response(model_text: str) -> PerceptReport:
    payload = extract_json_block(model_text)
    _validate_schema("percept", payload)
    report = PerceptReport.from_json_dict(payload)

    ids = report.object_ids()
    for group in report.gestalt_groups:
        for member in group.members:
            if member not in ids:
                raise DanglingRef(member, "gestalt group member")
    for connector in report.connectors:
        for ref in (connector.source, connector.target):
            if ref not in ids:
                raise DanglingRef(ref, "connector endpoint")
    return report


def parse_layout_response(model_text: str, context: Optional[PerceptReport] = None) -> LayoutPlan:
    """Parse a layout plan; ``context`` enables dropped-connector warnings."""
    payload = extract_json_block(model_text)
    _validate_schema("plan", payload)
    plan = LayoutPlan.from_json_dict(payload)

    element_ids = {e.id for e in plan.elements}
    if len(element_ids) != len(plan.elements):
        seen: set[str] = set()
        for e in plan.elements:
            if e.id in seen:
                raise SchemaViolation(f"$.elements[id={e.id}]", "duplicate element id")
            seen.add(e.id)
    region_ids = {r.id for r in plan.regions}
    for element in plan.elements:
        if element.region is not None and element.region not in region_ids:
            raise MissingRegion(element.region, element.id)
        if element.style_role is not None and element.style_role not in plan.styles:
            raise DanglingRef(element.style_role, f"style role of element \"{element.id}\"")

    for constraint in plan.aligns:
        for ref in (constraint.a, constraint.b):
            if ref not in element_ids:
                raise DanglingRef(ref, "align operand")
    for constraint in plan.connects:
        for ref in (constraint.source, constraint.target):
            if ref not in element_ids:
                raise DanglingRef(ref, "connect endpoint")
    for constraint in plan.layers:
        if constraint.element not in element_ids:
            raise DanglingRef(constraint.element, "layer operand")

    if context is not None:
        plan.warnings = tuple(_dropped_connector_warnings(context.connectors, plan))
    return plan


def _dropped_connector_warnings(connectors: tuple[Connector, ...], plan: LayoutPlan) -> list[str]:
    """Connector pairs from the perceptual report with no connect constraint."""
    realized = {(c.source, c.target) for c in plan.connects}
    warnings = []
    for connector in connectors:
        pair = (connector.source, connector.target)
        if pair in realized:
            continue
        if not connector.directed and (pair[1], pair[0]) in realized:
            continue
        warnings.append(f"connector {connector.source} -> {connector.target} has no connect constraint in the plan")
    return warnings
