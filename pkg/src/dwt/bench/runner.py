"""Manifest-driven batch evaluation.

Per entry: run the pipeline, gate the final XML, score it structurally
against the reference, and (optionally) render both sides and ship them
across the metrics boundary. Entry failures are recorded in the report and
never abort the batch. With no metrics endpoint/command configured the run
is fully self-contained and only structural metrics populate.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from dwt.bench.manifest import BenchmarkManifest, ManifestEntry
from dwt.bench.metrics_client import MetricsPair, MetricsResult, score_pairs
from dwt.bench.structural import StructuralScore, structural_similarity
from dwt.complexity import classify, profile
from dwt.mxgraph.model import GraphDocument
from dwt.mxgraph.parser import ParseError, parse_document
from dwt.pipeline.client import ModelClient, ModelError
from dwt.pipeline.runner import InputDiagram, PipelineConfig, StageError, run_pipeline
from dwt.render.raster import rasterize
from dwt.render.svg import RenderError, RenderOptions, render_svg

DIFFICULTY_ORDER = ("Easy", "Medium", "Hard", "Overall")

CSV_COLUMNS = (
    "difficulty",
    "entries",
    "validity",
    "clip",
    "dino",
    "fid",
    "aesthetic",
    "tokens_k",
    "node_f1",
    "edge_f1",
    "label_similarity",
    "structural",
)


@dataclass
class EntryResult:
    id: str
    difficulty: str
    valid: bool
    tokens: int
    structural: Optional[StructuralScore] = None
    clip: Optional[float] = None
    dino: Optional[float] = None
    aesthetic: Optional[float] = None
    fallback: bool = False
    error: Optional[str] = None
    final_xml: Optional[str] = None

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "difficulty": self.difficulty,
            "valid": self.valid,
            "tokens": self.tokens,
            "structural": self.structural.to_json_dict() if self.structural else None,
            "clip": self.clip,
            "dino": self.dino,
            "aesthetic": self.aesthetic,
            "fallback": self.fallback,
            "error": self.error,
        }


@dataclass
class MetricReport:
    entries: list[EntryResult] = field(default_factory=list)
    aggregates: dict[str, dict] = field(default_factory=dict)
    checkpoints: Optional[dict[str, str]] = None

    def to_json_dict(self) -> dict:
        return {
            "entries": [e.to_json_dict() for e in self.entries],
            "aggregates": self.aggregates,
            "checkpoints": self.checkpoints,
        }

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for difficulty in DIFFICULTY_ORDER:
            if difficulty not in self.aggregates:
                continue
            row = {"difficulty": difficulty}
            for column in CSV_COLUMNS[1:]:
                value = self.aggregates[difficulty].get(column)
                row[column] = "" if value is None else value
            writer.writerow(row)
        return buffer.getvalue()


def run_benchmark(
    manifest: BenchmarkManifest,
    client_factory: Callable[[], ModelClient],
    config: PipelineConfig,
    metrics_endpoint: Optional[str] = None,
    metrics_cmd: Optional[str] = None,
    out_dir: Optional[Path] = None,
    jobs: int = 1,
) -> MetricReport:
    out = Path(out_dir) if out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)

    want_metrics = metrics_endpoint is not None or metrics_cmd is not None
    render_dir = (out / "renders") if (out and want_metrics) else None
    if render_dir:
        render_dir.mkdir(exist_ok=True)

    def evaluate(entry: ManifestEntry) -> tuple[EntryResult, Optional[GraphDocument]]:
        return _evaluate_entry(entry, client_factory, config)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            evaluated = list(pool.map(evaluate, manifest.entries))
    else:
        evaluated = [evaluate(entry) for entry in manifest.entries]

    results = [result for result, _ in evaluated]

    fids: dict[str, Optional[float]] = {}
    checkpoints: Optional[dict[str, str]] = None
    if want_metrics:
        fids, checkpoints = _merge_perceptual_scores(evaluated, render_dir, metrics_endpoint, metrics_cmd, results)

    report = MetricReport(entries=results, checkpoints=checkpoints)
    report.aggregates = compute_aggregates(results)
    for difficulty, fid in fids.items():
        if difficulty in report.aggregates:
            report.aggregates[difficulty]["fid"] = fid

    if out:
        (out / "report.json").write_text(json.dumps(report.to_json_dict(), indent=1), encoding="utf-8")
        (out / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    return report


def _evaluate_entry(
    entry: ManifestEntry,
    client_factory: Callable[[], ModelClient],
    config: PipelineConfig,
) -> tuple[EntryResult, Optional[GraphDocument]]:
    try:
        reference = parse_document(entry.reference_xml_path.read_text(encoding="utf-8"))
    except (OSError, ParseError) as exc:
        return EntryResult(entry.id, entry.difficulty or "Easy", False, 0, error=f"reference: {exc}"), None

    difficulty = entry.difficulty or classify(profile(reference.model))

    try:
        image = InputDiagram.load(entry.image_path)
    except (OSError, ValueError) as exc:
        return EntryResult(entry.id, difficulty, False, 0, error=f"image: {exc}"), None

    try:
        outcome = run_pipeline(image, client_factory(), config)
    except (ModelError, StageError, ValueError) as exc:
        return EntryResult(entry.id, difficulty, False, 0, error=f"pipeline: {exc}"), None

    result = EntryResult(
        id=entry.id,
        difficulty=difficulty,
        valid=outcome.valid,
        tokens=outcome.total_usage.total_tokens,
        fallback=outcome.fallback,
        final_xml=outcome.final_xml,
    )
    if outcome.valid:
        candidate = parse_document(outcome.final_xml)
        result.structural = structural_similarity(candidate.model, reference.model)
    return result, reference


def _merge_perceptual_scores(
    evaluated, render_dir, endpoint, command, results
) -> tuple[dict[str, Optional[float]], Optional[dict[str, str]]]:
    """Render pairs per difficulty group and merge the scorer's fields.

    Returns the per-group FID values and the scorer's checkpoint ids."""
    groups: dict[str, list[MetricsPair]] = {}
    by_id = {result.id: result for result in results}
    for result, reference in evaluated:
        if not result.valid or reference is None or result.final_xml is None:
            continue
        try:
            candidate_png = render_dir / f"{result.id}.candidate.png"
            reference_png = render_dir / f"{result.id}.reference.png"
            candidate_png.write_bytes(rasterize(render_svg(parse_document(result.final_xml).model, RenderOptions())))
            reference_png.write_bytes(rasterize(render_svg(reference.model, RenderOptions())))
        except (RenderError, ParseError, OSError) as exc:
            result.error = f"render: {exc}"
            continue
        groups.setdefault(result.difficulty, []).append(MetricsPair(result.id, candidate_png, reference_png))

    fids: dict[str, Optional[float]] = {}
    checkpoints: Optional[dict[str, str]] = None
    for difficulty, pairs in groups.items():
        scored: MetricsResult = score_pairs(pairs, endpoint=endpoint, command=command)
        fids[difficulty] = scored.fid
        checkpoints = scored.checkpoints or checkpoints
        for pair_id, fields in scored.per_pair.items():
            row = by_id[pair_id]
            row.clip = fields["clip"]
            row.dino = fields["dino"]
            row.aesthetic = fields["aesthetic"]
    return fids, checkpoints


def compute_aggregates(results: list[EntryResult]) -> dict[str, dict]:
    """Per-difficulty and overall mean rows, recomputable from the entries."""

    def mean(values: list[float]) -> Optional[float]:
        return round(sum(values) / len(values), 6) if values else None

    def row(subset: list[EntryResult]) -> dict:
        structural = [r.structural for r in subset if r.structural is not None]
        return {
            "entries": len(subset),
            "validity": round(sum(1 for r in subset if r.valid) / len(subset), 6) if subset else 0.0,
            "clip": mean([r.clip for r in subset if r.clip is not None]),
            "dino": mean([r.dino for r in subset if r.dino is not None]),
            "fid": None,
            "aesthetic": mean([r.aesthetic for r in subset if r.aesthetic is not None]),
            "tokens_k": round(sum(r.tokens for r in subset) / 1000.0 / len(subset), 6) if subset else 0.0,
            "node_f1": mean([s.node_f1 for s in structural]),
            "edge_f1": mean([s.edge_f1 for s in structural]),
            "label_similarity": mean([s.label_similarity for s in structural]),
            "structural": mean([s.combined for s in structural]),
        }

    aggregates: dict[str, dict] = {}
    for difficulty in ("Easy", "Medium", "Hard"):
        subset = [r for r in results if r.difficulty == difficulty]
        if subset:
            aggregates[difficulty] = row(subset)
    aggregates["Overall"] = row(results)
    return aggregates
