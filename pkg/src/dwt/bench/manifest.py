"""Benchmark manifest: the entry list driving a batch evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import json

from dwt.complexity import DIFFICULTIES
from dwt.schema_registry import validate_against


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    image_path: Path
    reference_xml_path: Path
    difficulty: Optional[str] = None


@dataclass(frozen=True)
class BenchmarkManifest:
    entries: tuple[ManifestEntry, ...]

    @classmethod
    def load(cls, path) -> "BenchmarkManifest":
        manifest_path = Path(path)
        try:
            payload = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ManifestError(f"cannot read manifest {manifest_path}: {exc}") from exc
        try:
            validate_against("manifest", payload)
        except Exception as exc:
            raise ManifestError(f"manifest schema violation: {exc}") from exc

        base = manifest_path.parent
        entries = []
        seen: set[str] = set()
        for raw in payload["entries"]:
            if raw["id"] in seen:
                raise ManifestError(f"duplicate entry id \"{raw['id']}\"")
            seen.add(raw["id"])
            difficulty = raw.get("difficulty")
            if difficulty is not None and difficulty not in DIFFICULTIES:
                raise ManifestError(f"entry \"{raw['id']}\": unknown difficulty {difficulty!r}")
            image = (base / raw["image_path"]).resolve()
            reference = (base / raw["reference_xml_path"]).resolve()
            for p in (image, reference):
                if not p.exists():
                    raise ManifestError(f"entry \"{raw['id']}\": path {p} does not exist")
            entries.append(
                ManifestEntry(
                    id=raw["id"], image_path=image, reference_xml_path=reference, difficulty=difficulty
                )
            )
        return cls(entries=tuple(entries))
