"""Command-line entry point.

Subcommands: convert, validate, render, analyze, benchmark, ir. Settings
resolve with ascending precedence: ``dwt.toml`` file < environment
variables < command-line flags. Exit codes: 0 success, 1 domain failure,
2 usage error.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import Optional

import click

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from dwt import complexity
from dwt.bench.manifest import BenchmarkManifest, ManifestError
from dwt.bench.runner import run_benchmark
from dwt.ir.parsing import parse_layout_response, parse_percept_response
from dwt.ir.types import IrError
from dwt.mxgraph.parser import ParseError, parse_document
from dwt.pipeline.client import API_KEY_ENV, HttpModelClient, ModelError, ScriptedClient
from dwt.pipeline.runner import InputDiagram, PipelineConfig, StageError, run_pipeline
from dwt.pipeline.templates import load_templates_from_dir
from dwt.render.raster import RasterError, rasterize
from dwt.render.svg import RenderError, RenderOptions, render_svg
from dwt.verifier import verify

MODEL_ENV = "DWT_MODEL"
BASE_URL_ENV = "DWT_BASE_URL"
CONFIG_FILE = "dwt.toml"


def _load_config_file(path: Optional[str]) -> dict:
    candidate = Path(path) if path else Path(CONFIG_FILE)
    if not candidate.exists():
        if path:
            raise click.UsageError(f"config file {candidate} does not exist")
        return {}
    with open(candidate, "rb") as handle:
        return tomllib.load(handle)


def _setting(flag, env_name: Optional[str], file_value, default):
    """Ascending precedence: file < env < flag."""
    value = default
    if file_value is not None:
        value = file_value
    if env_name and os.environ.get(env_name):
        value = os.environ[env_name]
    if flag is not None:
        value = flag
    return value


@click.group()
@click.option("--config", "config_path", type=str, default=None, help=f"settings file (default ./{CONFIG_FILE})")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str]) -> None:
    """Reconstruct rasterized diagrams as editable draw.io XML."""
    ctx.ensure_object(dict)
    ctx.obj["file"] = _load_config_file(config_path)


def _file_section(ctx: click.Context, section: str) -> dict:
    return ctx.obj.get("file", {}).get(section, {}) if ctx.obj else {}


def _read_xml(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.UsageError(f"cannot read {path}: {exc}")


@main.command()
@click.argument("xml_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="emit the verdict as JSON")
@click.pass_context
def validate(ctx: click.Context, xml_file: str, as_json: bool) -> None:
    """Check a draw.io XML file; exit 0 if valid, 1 if not."""
    verdict = verify(_read_xml(xml_file))
    if as_json:
        click.echo(json.dumps(verdict.to_json_dict(), indent=1))
    else:
        click.echo(f"{xml_file}: {verdict.status}")
        for finding in verdict.findings:
            click.echo(f"  [{finding.severity}] {finding.code} at {finding.location}: {finding.message}")
    ctx.exit(0 if verdict.is_valid else 1)


@main.command()
@click.argument("xml_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=str, help="output .svg or .png path")
@click.option("--scale", type=float, default=None, help="pixels per model unit")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def render(ctx: click.Context, xml_file: str, out_path: str, scale: Optional[float], as_json: bool) -> None:
    """Render a draw.io XML file to SVG or PNG."""
    section = _file_section(ctx, "render")
    options = RenderOptions(
        scale=float(_setting(scale, None, section.get("scale"), 1.0)),
        padding=float(section.get("padding", 10.0)),
    )
    out = Path(out_path)
    if out.suffix.lower() not in (".svg", ".png"):
        raise click.UsageError("--out must end in .svg or .png")
    try:
        document = parse_document(_read_xml(xml_file))
        svg = render_svg(document.model, options)
        if out.suffix.lower() == ".svg":
            out.write_text(svg, encoding="utf-8")
        else:
            out.write_bytes(rasterize(svg, 1.0))
    except (ParseError, RenderError, RasterError) as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(1)
        return
    info = {
        "out": str(out),
        "format": out.suffix.lower().lstrip("."),
        "bytes": out.stat().st_size,
        "vertices": document.model.vertex_count,
        "edges": document.model.edge_count,
    }
    click.echo(json.dumps(info, indent=1) if as_json else f"wrote {info['format']} to {out} ({info['bytes']} bytes)")


@main.command()
@click.argument("xml_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def analyze(ctx: click.Context, xml_file: str, as_json: bool) -> None:
    """Score diagram complexity and classify difficulty."""
    section = _file_section(ctx, "complexity")
    try:
        document = parse_document(_read_xml(xml_file))
    except ParseError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(1)
        return
    prof = complexity.profile(document.model)
    difficulty = complexity.classify(
        prof,
        easy_below=float(section.get("easy_below", complexity.EASY_BELOW)),
        hard_from=float(section.get("hard_from", complexity.HARD_FROM)),
    )
    payload = prof.to_json_dict()
    payload["difficulty"] = difficulty
    if as_json:
        click.echo(json.dumps(payload, indent=1))
    else:
        click.echo(f"{xml_file}: {difficulty}")
        for name in ("connection", "graphical", "color", "text", "special"):
            click.echo(f"  {name:<11} {payload[name]:.2f}")


def _build_client_and_config(ctx, model, base_url, scripted, max_refine, retries, trace_dir,
                             fallback_skeleton, reattach_image, templates_dir):
    model_section = _file_section(ctx, "model")
    pipeline_section = _file_section(ctx, "pipeline")
    resolved_model = _setting(model, MODEL_ENV, model_section.get("name"), None)
    resolved_base = _setting(base_url, BASE_URL_ENV, model_section.get("base_url"), None)

    if scripted:
        client_factory = lambda: ScriptedClient.from_dir(scripted)  # noqa: E731
    else:
        if not resolved_model or not resolved_base:
            raise click.UsageError(
                "no model configured: pass --scripted DIR for a hermetic run, or set "
                f"--model/--base-url (env {MODEL_ENV}/{BASE_URL_ENV}, or [model] in {CONFIG_FILE})"
            )
        api_key_env = model_section.get("api_key_env", API_KEY_ENV)
        api_key = os.environ.get(api_key_env, "")
        if not api_key:
            raise click.UsageError(
                f"environment variable {api_key_env} is not set; export an API key or use --scripted DIR"
            )
        shared = HttpModelClient(model=resolved_model, base_url=resolved_base, api_key=api_key)
        client_factory = lambda: shared  # noqa: E731

    config = PipelineConfig(
        t_refine=int(_setting(max_refine, None, pipeline_section.get("t_refine"), 3)),
        retries=int(_setting(retries, None, pipeline_section.get("retries"), 2)),
        trace_dir=Path(trace_dir) if trace_dir else None,
        fallback_skeleton=fallback_skeleton,
        reattach_image=reattach_image,
    )
    if templates_dir:
        config.templates = load_templates_from_dir(templates_dir)
    return client_factory, config


@main.command()
@click.argument("image", type=click.Path(exists=True, dir_okay=False))
@click.option("--model", type=str, default=None, help="model name for the HTTP client")
@click.option("--base-url", type=str, default=None, help="chat-completions base URL")
@click.option("--scripted", type=click.Path(exists=True, file_okay=False), default=None,
              help="replay canned responses from a directory instead of calling a model")
@click.option("--max-refine", type=int, default=None, help="refinement round cap (default 3)")
@click.option("--retries", type=int, default=None, help="stage-1 re-ask attempts (default 2)")
@click.option("--trace-dir", type=str, default=None, help="write per-run IR and round artifacts here")
@click.option("--fallback-skeleton", is_flag=True, help="realize the plan directly if refinement never validates")
@click.option("--reattach-image", is_flag=True, help="also attach the image to later phases")
@click.option("--templates-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="override prompt templates from <dir>/<phase>.txt")
@click.option("--out", "out_path", type=str, default=None, help="write the final XML here")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def convert(ctx, image, model, base_url, scripted, max_refine, retries, trace_dir,
            fallback_skeleton, reattach_image, templates_dir, out_path, as_json) -> None:
    """Reconstruct a rasterized diagram image as draw.io XML."""
    client_factory, config = _build_client_and_config(
        ctx, model, base_url, scripted, max_refine, retries, trace_dir,
        fallback_skeleton, reattach_image, templates_dir,
    )
    try:
        diagram = InputDiagram.load(image)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    try:
        result = run_pipeline(diagram, client_factory(), config)
    except (ModelError, StageError) as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(1)
        return
    if out_path:
        Path(out_path).write_text(result.final_xml, encoding="utf-8")
    if as_json:
        click.echo(json.dumps(result.to_json_dict(), indent=1))
    else:
        rounds = len(result.trace.rounds)
        click.echo(
            f"valid={result.valid} rounds={rounds} t_star={result.trace.t_star} "
            f"tokens={result.total_usage.total_tokens}" + (" (fallback skeleton)" if result.fallback else "")
        )
        if not out_path:
            click.echo(result.final_xml)
    ctx.exit(0 if result.valid else 1)


@main.command()
@click.argument("manifest_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--model", type=str, default=None)
@click.option("--base-url", type=str, default=None)
@click.option("--scripted", type=click.Path(exists=True, file_okay=False), default=None,
              help="fresh scripted client per entry, replaying this directory")
@click.option("--metrics-endpoint", type=str, default=None, help="HTTP perceptual-metrics scorer")
@click.option("--metrics-cmd", type=str, default=None, help="command invoked as: CMD job.json (response on stdout)")
@click.option("--max-refine", type=int, default=None)
@click.option("--jobs", type=int, default=1, help="parallel entry workers")
@click.option("--out-dir", type=str, default=None, help="write report.json/report.csv (and renders) here")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def benchmark(ctx, manifest_file, model, base_url, scripted, metrics_endpoint, metrics_cmd,
              max_refine, jobs, out_dir, as_json) -> None:
    """Evaluate the pipeline over a manifest of image/reference pairs."""
    if metrics_endpoint and metrics_cmd:
        raise click.UsageError("--metrics-endpoint and --metrics-cmd are mutually exclusive")
    client_factory, config = _build_client_and_config(
        ctx, model, base_url, scripted, max_refine, None, None, False, False, None
    )
    try:
        manifest = BenchmarkManifest.load(manifest_file)
    except ManifestError as exc:
        raise click.UsageError(str(exc))
    report = run_benchmark(
        manifest,
        client_factory,
        config,
        metrics_endpoint=metrics_endpoint,
        metrics_cmd=metrics_cmd,
        out_dir=Path(out_dir) if out_dir else None,
        jobs=jobs,
    )
    if as_json:
        click.echo(json.dumps(report.to_json_dict(), indent=1))
    else:
        click.echo(report.to_csv())
    failed = [e for e in report.entries if e.error]
    ctx.exit(1 if failed or not report.entries else 0)


@main.command(name="ir")
@click.argument("path", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def ir_inspect(ctx, path: str, as_json: bool) -> None:
    """Validate and summarize traced IR files (*.percept.json, *.plan.json)."""
    target = Path(path)
    files = sorted(target.glob("*.json")) if target.is_dir() else [target]
    rows = []
    for file in files:
        row: dict = {"path": str(file), "kind": "other", "valid": False}
        text = file.read_text(encoding="utf-8")
        if file.name.endswith(".percept.json"):
            row["kind"] = "percept"
            try:
                report = parse_percept_response(text)
                row.update(valid=True, objects=len(report.object_ids()), connectors=len(report.connectors))
            except IrError as exc:
                row["detail"] = str(exc)
        elif file.name.endswith(".plan.json"):
            row["kind"] = "plan"
            try:
                plan = parse_layout_response(text)
                row.update(valid=True, elements=len(plan.elements), constraints=len(plan.constraints))
            except IrError as exc:
                row["detail"] = str(exc)
        else:
            row["detail"] = "not an IR file"
        rows.append(row)
    payload = {"files": rows}
    if as_json:
        click.echo(json.dumps(payload, indent=1))
    else:
        for row in rows:
            status = "ok" if row["valid"] else f"INVALID ({row.get('detail', '')})"
            click.echo(f"{row['path']} [{row['kind']}]: {status}")
    ir_files = [r for r in rows if r["kind"] != "other"]
    ctx.exit(0 if ir_files and all(r["valid"] for r in ir_files) else 1)


if __name__ == "__main__":
    main(sys.argv[1:])
