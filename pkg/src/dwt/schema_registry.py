"""Access to the JSON schemas shipped with the package."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """Load ``<name>.schema.json`` from the shipped schema directory."""
    path = resources.files("dwt") / "schemas" / f"{name}.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def validator_for(name: str) -> jsonschema.Draft202012Validator:
    return jsonschema.Draft202012Validator(load_schema(name))


def validate_against(name: str, payload: object) -> None:
    """Raise ``jsonschema.ValidationError`` if payload violates the schema."""
    validator_for(name).validate(payload)
