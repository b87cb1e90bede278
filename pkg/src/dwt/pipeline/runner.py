"""Two-stage pipeline driver.

Stage 1 prompts for the perceptual report and the layout plan (with bounded
re-asks on unparseable replies). Stage 2 generates the XML document and
runs the verifier-gated refinement loop: re-prompt with the previous
document plus structured findings until the gate accepts or the round cap
is exhausted. Every model call lands in the trace with its token usage.
"""

from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from PIL import Image, UnidentifiedImageError

from dwt.ir.parsing import extract_json_block, parse_layout_response, parse_percept_response
from dwt.ir.skeleton import plan_to_skeleton
from dwt.ir.types import IrError, LayoutPlan, NoStructuredBlock, PerceptReport
from dwt.mxgraph.builder import BuildError, EdgeSpec, NodeSpec, StyleCatalog, build_document
from dwt.mxgraph.model import HostMeta, Point
from dwt.mxgraph.serializer import serialize_document
from dwt.pipeline.client import CompletionParams, ModelClient, UsageStats
from dwt.pipeline.templates import PromptTemplate, load_default_templates
from dwt.verifier import Verdict, findings_to_feedback, verify

IMAGE_SLOT_TEXT = "(the diagram image is attached)"

_XML_FENCE = re.compile(r"```(?:xml)?\s*\n(.*?)```", re.DOTALL)


class StageError(RuntimeError):
    """A pipeline stage failed after exhausting its retries."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class InputDiagram:
    """A decoded raster input (PNG or JPEG)."""

    data: bytes
    format: str
    name: str = "diagram"

    @classmethod
    def load(cls, path) -> "InputDiagram":
        p = Path(path)
        data = p.read_bytes()
        return cls.from_bytes(data, name=p.stem)

    @classmethod
    def from_bytes(cls, data: bytes, name: str = "diagram") -> "InputDiagram":
        try:
            with Image.open(io.BytesIO(data)) as im:
                fmt = (im.format or "").lower()
        except (UnidentifiedImageError, OSError) as exc:
            raise ValueError(f"input image does not decode: {exc}") from exc
        if fmt not in ("png", "jpeg"):
            raise ValueError(f"unsupported image format {fmt!r} (PNG or JPEG required)")
        return cls(data=data, format=fmt, name=name)


@dataclass
class PipelineConfig:
    templates: dict[str, PromptTemplate] = field(default_factory=load_default_templates)
    t_refine: int = 3
    retries: int = 2
    max_tokens: int = 8192
    temperature: float = 0.0
    trace_dir: Optional[Path] = None
    fallback_skeleton: bool = False
    reattach_image: bool = False
    max_continuations: int = 2

    @property
    def params(self) -> CompletionParams:
        return CompletionParams(max_tokens=self.max_tokens, temperature=self.temperature)


@dataclass
class RefinementRound:
    t: int
    xml: str
    verdict: Verdict
    feedback: str
    usage: UsageStats


@dataclass
class RefinementTrace:
    rounds: list[RefinementRound] = field(default_factory=list)
    t_star: Optional[int] = None
    t_refine_cap: int = 3

    def to_json_dict(self) -> dict:
        return {
            "t_star": self.t_star,
            "t_refine_cap": self.t_refine_cap,
            "rounds": [
                {
                    "t": r.t,
                    "xml": r.xml,
                    "verdict": r.verdict.to_json_dict(),
                    "feedback": r.feedback,
                    "usage": r.usage.to_json_dict(),
                }
                for r in self.rounds
            ],
        }


@dataclass
class StageOneResult:
    percept: PerceptReport
    plan: LayoutPlan
    usage: UsageStats


@dataclass
class PipelineResult:
    final_xml: str
    valid: bool
    trace: RefinementTrace
    percept: Optional[PerceptReport]
    plan: Optional[LayoutPlan]
    total_usage: UsageStats
    fallback: bool = False

    def to_json_dict(self) -> dict:
        return {
            "valid": self.valid,
            "fallback": self.fallback,
            "final_xml": self.final_xml,
            "total_usage": self.total_usage.to_json_dict(),
            "trace": self.trace.to_json_dict(),
            "percept": self.percept.to_json_dict() if self.percept else None,
            "plan": self.plan.to_json_dict() if self.plan else None,
        }


def run_stage1(image: InputDiagram, client: ModelClient, config: PipelineConfig) -> StageOneResult:
    """Phase 1.1 (perceptual report) then phase 1.2 (layout plan)."""
    usage = UsageStats()
    tracer = _Tracer(config.trace_dir, image.name)

    prompt = config.templates["percept"].render(image=IMAGE_SLOT_TEXT)
    percept, used = _ask_until_parsed(
        client, prompt, [image.data], config, parse=parse_percept_response, stage="stage1.percept"
    )
    usage += used
    tracer.write_json("percept.json", percept.to_json_dict())

    plan_prompt = config.templates["hierarchy"].render(
        percept_json=json.dumps(percept.to_json_dict(), indent=1)
    )
    plan_images = [image.data] if config.reattach_image else []
    plan, used = _ask_until_parsed(
        client,
        plan_prompt,
        plan_images,
        config,
        parse=lambda text: parse_layout_response(text, context=percept),
        stage="stage1.plan",
    )
    usage += used
    tracer.write_json("plan.json", plan.to_json_dict())
    return StageOneResult(percept=percept, plan=plan, usage=usage)


def _ask_until_parsed(client, prompt, images, config, parse, stage):
    """Call the model, re-asking with the parse error appended, up to
    ``config.retries`` extra attempts."""
    tracer = _Tracer(config.trace_dir, stage)
    usage = UsageStats()
    error: Optional[IrError] = None
    ask = prompt
    for attempt in range(config.retries + 1):
        result = client.complete(ask, images, config.params)
        usage += result.usage
        tracer.write_text(f"attempt{attempt}.raw.txt", result.text)
        try:
            return parse(result.text), usage
        except IrError as exc:
            error = exc
            ask = (
                prompt
                + f"\n\nYour previous reply could not be used: {exc}."
                + " Reply again with one fenced ```json block that fixes this."
            )
    raise StageError(stage, error if error is not None else NoStructuredBlock())


def run_stage2(
    plan: LayoutPlan,
    image: InputDiagram,
    client: ModelClient,
    config: PipelineConfig,
    t_refine: Optional[int] = None,
) -> PipelineResult:
    """Generate XML from the plan, then refine until the gate accepts."""
    cap = config.t_refine if t_refine is None else t_refine
    if cap < 0:
        raise ValueError("t_refine must be >= 0")
    tracer = _Tracer(config.trace_dir, image.name)
    trace = RefinementTrace(t_refine_cap=cap)
    usage = UsageStats()

    prompt = config.templates["code"].render(plan_json=json.dumps(plan.to_json_dict(), indent=1))
    images = [image.data] if config.reattach_image else []
    xml, round_usage = _generate_xml(client, prompt, images, config)
    usage += round_usage

    for t in range(cap + 1):
        verdict = verify(xml)
        feedback = "" if verdict.is_valid else findings_to_feedback(verdict)
        trace.rounds.append(RefinementRound(t=t, xml=xml, verdict=verdict, feedback=feedback, usage=round_usage))
        tracer.write_text(f"round{t}.xml", xml)
        if verdict.is_valid:
            trace.t_star = t
            break
        if t == cap:
            break
        refine_prompt = config.templates["refine"].render(prev_xml=xml, feedback=feedback)
        xml, round_usage = _generate_xml(client, refine_prompt, images, config)
        usage += round_usage

    valid = trace.t_star is not None
    final_round = trace.rounds[trace.t_star] if valid else trace.rounds[-1]
    return PipelineResult(
        final_xml=final_round.xml,
        valid=valid,
        trace=trace,
        percept=None,
        plan=plan,
        total_usage=usage,
    )


def _generate_xml(client, prompt, images, config) -> tuple[str, UsageStats]:
    result = client.complete(prompt, images, config.params)
    usage = result.usage
    xml = _extract_xml(result.text)

    # truncated responses get explicit continue turns, appended verbatim
    continuations = 0
    while continuations < config.max_continuations and _looks_truncated(xml):
        more = client.complete(
            "Your previous reply was cut off before the document ended. "
            "Continue exactly where it stopped; output only the remaining XML, no fences.",
            [],
            config.params,
        )
        usage += more.usage
        xml += _strip_fences(more.text)
        continuations += 1
    return xml, usage


def _strip_fences(text: str) -> str:
    match = _XML_FENCE.search(text)
    return match.group(1) if match else text.replace("```", "")


def _extract_xml(text: str) -> str:
    """Best-effort document extraction; never raises — anything unusable
    simply fails verification and feeds the refinement loop."""
    for match in _XML_FENCE.finditer(text):
        block = match.group(1).strip()
        if "<mxGraphModel" in block or "<mxfile" in block:
            return block
    try:
        payload = extract_json_block(text)
    except NoStructuredBlock:
        payload = None
    if isinstance(payload, dict) and "nodes" in payload:
        try:
            return _assemble_parts(payload)
        except (BuildError, KeyError, TypeError, ValueError):
            pass
    stripped = text.strip()
    if stripped.startswith("<"):
        return stripped
    matches = _XML_FENCE.findall(text)
    if matches:
        return matches[0].strip()
    return stripped


def _assemble_parts(payload: dict) -> str:
    """Assemble a five-part structured response (doc/styles/nodes/layout/edges)."""
    layout = payload.get("layout", {})
    styles = StyleCatalog.from_strings(payload.get("styles", {}))
    nodes = []
    for raw in payload["nodes"]:
        box = layout.get(raw["id"], {})
        nodes.append(
            NodeSpec(
                id=raw["id"],
                label=raw.get("label", ""),
                x=float(box.get("x", raw.get("x", 0))),
                y=float(box.get("y", raw.get("y", 0))),
                width=float(box.get("width", raw.get("width", 160))),
                height=float(box.get("height", raw.get("height", 60))),
                style_role=raw.get("style_role"),
                group=bool(raw.get("group", False)),
                parent=raw.get("parent"),
            )
        )
    edges = [
        EdgeSpec(
            source=raw["from"],
            target=raw["to"],
            label=raw.get("label", ""),
            style_role=raw.get("style_role"),
            waypoints=tuple(Point(float(p["x"]), float(p["y"])) for p in raw.get("points", [])),
        )
        for raw in payload.get("edges", [])
    ]
    doc_attrs = payload.get("doc", {})
    meta = HostMeta(wrapped=True, file_attrs={str(k): str(v) for k, v in doc_attrs.items()}) if doc_attrs else None
    return serialize_document(build_document(nodes, edges, styles, host_meta=meta))


def _looks_truncated(xml: str) -> bool:
    text = xml.strip()
    if not text.startswith("<"):
        return False
    verdict = verify(text)
    return any(f.code == "E_UNCLOSED_TAG" for f in verdict.findings)


def run_pipeline(image: InputDiagram, client: ModelClient, config: PipelineConfig) -> PipelineResult:
    """Stage 1 then stage 2; stage-1 failure short-circuits stage 2."""
    stage1 = run_stage1(image, client, config)
    result = run_stage2(stage1.plan, image, client, config)
    result.percept = stage1.percept
    result.total_usage = stage1.usage + result.total_usage

    if not result.valid and config.fallback_skeleton:
        document = plan_to_skeleton(stage1.plan)
        result.final_xml = serialize_document(document)
        result.valid = verify(result.final_xml).is_valid
        result.fallback = True

    tracer = _Tracer(config.trace_dir, image.name)
    tracer.write_json("result.json", result.to_json_dict())
    return result


class _Tracer:
    """Writes per-run artifacts under the trace dir; inert when unset."""

    def __init__(self, trace_dir: Optional[Path], stem: str):
        self.base = Path(trace_dir) if trace_dir else None
        self.stem = stem

    def _path(self, suffix: str) -> Path:
        assert self.base is not None
        self.base.mkdir(parents=True, exist_ok=True)
        return self.base / f"{self.stem}.{suffix}"

    def write_text(self, suffix: str, text: str) -> None:
        if self.base is not None:
            self._path(suffix).write_text(text, encoding="utf-8")

    def write_json(self, suffix: str, payload: dict) -> None:
        if self.base is not None:
            self._path(suffix).write_text(json.dumps(payload, indent=1), encoding="utf-8")
