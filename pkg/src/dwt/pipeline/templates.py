"""Versioned prompt templates for the four model phases.

Templates ship as editable text assets; slots are ``{name}`` tokens bound
at render time. Rendering with an unbound slot is an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

TEMPLATE_VERSION = "v1"

#: template key -> (spec phase id, asset file)
PHASES = {
    "percept": "PerceptThought",
    "hierarchy": "HierarchyThought",
    "code": "CodeThought",
    "refine": "RefineThought",
}

_SLOT = re.compile(r"\{(\w+)\}")


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    text: str
    version: str = TEMPLATE_VERSION

    @property
    def slots(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(_SLOT.findall(self.text)))

    def render(self, **bindings: str) -> str:
        def replace(match: re.Match) -> str:
            name = match.group(1)
            if name not in bindings:
                raise TemplateError(f"template {self.id} slot {{{name}}} is unbound")
            return str(bindings[name])

        return _SLOT.sub(replace, self.text)


def load_default_templates() -> dict[str, PromptTemplate]:
    templates = {}
    for key, phase_id in PHASES.items():
        path = resources.files("dwt") / "pipeline" / "templates_data" / f"{key}.txt"
        templates[key] = PromptTemplate(id=phase_id, text=path.read_text(encoding="utf-8"))
    return templates


def load_templates_from_dir(directory) -> dict[str, PromptTemplate]:
    """Override templates with ``<key>.txt`` files from a directory."""
    from pathlib import Path

    templates = load_default_templates()
    base = Path(directory)
    for key, phase_id in PHASES.items():
        candidate = base / f"{key}.txt"
        if candidate.exists():
            templates[key] = PromptTemplate(
                id=phase_id, text=candidate.read_text(encoding="utf-8"), version=f"dir:{base.name}"
            )
    return templates
