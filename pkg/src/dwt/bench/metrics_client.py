"""Client side of the perceptual-metrics boundary.

The harness hands image pairs to an external scorer either by invoking a
command with a job file (stdout carries the response JSON) or by POSTing
the job to an HTTP endpoint. Both sides speak the shipped
``metrics_job`` / ``metrics_response`` schemas.
"""

from __future__ import annotations

import json
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import requests

from dwt.schema_registry import validate_against


class MetricsBoundaryError(RuntimeError):
    pass


@dataclass(frozen=True)
class MetricsPair:
    id: str
    candidate_png: Path
    reference_png: Path


@dataclass(frozen=True)
class MetricsResult:
    per_pair: dict[str, dict[str, float]]
    fid: Optional[float]
    checkpoints: dict[str, str] = field(default_factory=dict)


def job_payload(pairs: list[MetricsPair]) -> dict:
    return {
        "pairs": [
            {"id": p.id, "candidate_png": str(p.candidate_png), "reference_png": str(p.reference_png)}
            for p in pairs
        ]
    }


def score_pairs(
    pairs: list[MetricsPair],
    endpoint: Optional[str] = None,
    command: Optional[str] = None,
    timeout: float = 600.0,
) -> MetricsResult:
    payload = job_payload(pairs)
    validate_against("metrics_job", payload)

    if command is not None:
        response = _via_command(payload, command, timeout)
    elif endpoint is not None:
        response = _via_endpoint(payload, endpoint, timeout)
    else:
        raise MetricsBoundaryError("neither a metrics command nor an endpoint is configured")

    try:
        validate_against("metrics_response", response)
    except Exception as exc:
        raise MetricsBoundaryError(f"metrics response violates the shared schema: {exc}") from exc
    per_pair = {
        row["id"]: {"clip": row["clip"], "dino": row["dino"], "aesthetic": row["aesthetic"]}
        for row in response["scores"]
    }
    return MetricsResult(per_pair=per_pair, fid=response["fid"], checkpoints=response.get("checkpoints", {}))


def _via_command(payload: dict, command: str, timeout: float) -> dict:
    with tempfile.NamedTemporaryFile("w", suffix=".job.json", delete=False) as handle:
        json.dump(payload, handle)
        job_path = handle.name
    try:
        argv = shlex.split(command) + [job_path]
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        if proc.returncode != 0:
            raise MetricsBoundaryError(
                f"metrics command failed (exit {proc.returncode}): {proc.stderr.strip()[:500]}"
            )
        try:
            return json.loads(proc.stdout)
        except json.JSONDecodeError as exc:
            raise MetricsBoundaryError(f"metrics command wrote non-JSON output: {exc}") from exc
    finally:
        Path(job_path).unlink(missing_ok=True)


def _via_endpoint(payload: dict, endpoint: str, timeout: float) -> dict:
    try:
        response = requests.post(endpoint, json=payload, timeout=timeout)
    except requests.RequestException as exc:
        raise MetricsBoundaryError(f"metrics endpoint unreachable: {exc}") from exc
    if response.status_code != 200:
        raise MetricsBoundaryError(f"metrics endpoint returned {response.status_code}: {response.text[:500]}")
    try:
        return response.json()
    except ValueError as exc:
        raise MetricsBoundaryError(f"metrics endpoint wrote non-JSON output: {exc}") from exc
