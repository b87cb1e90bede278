"""Model client contract plus the two shipped implementations.

``HttpModelClient`` speaks the OpenAI-compatible chat-completions wire
shape (JSON body, messages with mixed text and base64 image parts) so any
hosted or local server works. ``ScriptedClient`` replays canned responses
and is a first-class way to run the pipeline hermetically.
"""

from __future__ import annotations

import base64
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol

import requests

API_KEY_ENV = "DWT_API_KEY"


class ModelError(RuntimeError):
    pass


@dataclass(frozen=True)
class UsageStats:
    prompt_tokens: int = 0
    completion_tokens: int = 0
    calls: int = 0

    @property
    def total_tokens(self) -> int:
        return self.prompt_tokens + self.completion_tokens

    def __add__(self, other: "UsageStats") -> "UsageStats":
        return UsageStats(
            self.prompt_tokens + other.prompt_tokens,
            self.completion_tokens + other.completion_tokens,
            self.calls + other.calls,
        )

    def to_json_dict(self) -> dict:
        return {
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
            "total_tokens": self.total_tokens,
            "calls": self.calls,
        }


@dataclass(frozen=True)
class CompletionParams:
    max_tokens: int = 8192
    temperature: float = 0.0


@dataclass(frozen=True)
class CompletionResult:
    text: str
    usage: UsageStats


class ModelClient(Protocol):
    """Stateless completion interface; implementations must be safe to share
    across concurrent pipeline runs."""

    def complete(self, prompt: str, images: list[bytes], params: CompletionParams) -> CompletionResult:
        ...


def _approx_tokens(text: str) -> int:
    return math.ceil(len(text) / 4) if text else 0


class HttpModelClient:
    """Chat-completions client over HTTP JSON.

    Wire shape: POST ``{base_url}/chat/completions`` with
    ``{"model": ..., "messages": [{"role": "user", "content": [
    {"type": "text", "text": ...},
    {"type": "image_url", "image_url": {"url": "data:image/png;base64,..."}}
    ]}], "max_tokens": ..., "temperature": ...}``; the response carries
    ``choices[0].message.content`` and optionally ``usage``.
    """

    def __init__(
        self,
        model: str,
        base_url: str,
        api_key: Optional[str] = None,
        timeout: float = 120.0,
        transport_retries: int = 2,
        image_format: str = "png",
    ):
        self.model = model
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self.timeout = timeout
        self.transport_retries = transport_retries
        self.image_format = image_format

    def complete(self, prompt: str, images: list[bytes], params: CompletionParams) -> CompletionResult:
        content: list[dict] = [{"type": "text", "text": prompt}]
        for image in images:
            encoded = base64.b64encode(image).decode("ascii")
            content.append(
                {"type": "image_url", "image_url": {"url": f"data:image/{self.image_format};base64,{encoded}"}}
            )
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": content}],
            "max_tokens": params.max_tokens,
            "temperature": params.temperature,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        last_error: Optional[Exception] = None
        for attempt in range(self.transport_retries + 1):
            try:
                response = requests.post(
                    f"{self.base_url}/chat/completions", json=body, headers=headers, timeout=self.timeout
                )
                if response.status_code >= 500:
                    raise ModelError(f"server error {response.status_code}")
                if response.status_code != 200:
                    raise ModelError(f"request rejected ({response.status_code}): {response.text[:300]}")
                payload = response.json()
                break
            except (requests.RequestException, ModelError) as exc:
                last_error = exc
                if isinstance(exc, ModelError) and "rejected" in str(exc):
                    raise  # 4xx will not improve on retry
                if attempt < self.transport_retries:
                    time.sleep(1.0 + attempt)
        else:
            raise ModelError(f"transport failed after {self.transport_retries + 1} attempts: {last_error}")

        try:
            text = payload["choices"][0]["message"]["content"] or ""
        except (KeyError, IndexError, TypeError) as exc:
            raise ModelError(f"malformed completion payload: {exc}") from exc
        raw_usage = payload.get("usage") or {}
        usage = UsageStats(
            prompt_tokens=int(raw_usage.get("prompt_tokens", _approx_tokens(prompt))),
            completion_tokens=int(raw_usage.get("completion_tokens", _approx_tokens(text))),
            calls=1,
        )
        return CompletionResult(text=text, usage=usage)


@dataclass
class ScriptedCall:
    prompt: str
    image_count: int


class ScriptedClient:
    """Replays a fixed response sequence; usage is a deterministic length
    heuristic so summation checks are exact."""

    def __init__(self, responses: list[str]):
        self._responses = list(responses)
        self._cursor = 0
        self.calls: list[ScriptedCall] = []

    @classmethod
    def from_dir(cls, directory) -> "ScriptedClient":
        base = Path(directory)
        files = sorted(p for p in base.iterdir() if p.is_file() and p.suffix in (".txt", ".md", ".xml"))
        if not files:
            raise ModelError(f"scripted response directory {base} contains no response files")
        return cls([p.read_text(encoding="utf-8") for p in files])

    @property
    def remaining(self) -> int:
        return len(self._responses) - self._cursor

    def complete(self, prompt: str, images: list[bytes], params: CompletionParams) -> CompletionResult:
        self.calls.append(ScriptedCall(prompt=prompt, image_count=len(images)))
        if self._cursor >= len(self._responses):
            raise ModelError(f"script exhausted after {len(self._responses)} responses")
        text = self._responses[self._cursor]
        self._cursor += 1
        return CompletionResult(
            text=text,
            usage=UsageStats(
                prompt_tokens=_approx_tokens(prompt),
                completion_tokens=_approx_tokens(text),
                calls=1,
            ),
        )
