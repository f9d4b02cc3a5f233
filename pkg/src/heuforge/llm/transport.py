"""Completion transports: live HTTP endpoint, recorded replay, and scripted.

Every transport exposes ``complete(digest, messages, temperature) -> str`` and
a ``network_calls`` counter so replay closure (zero network operations) is
directly assertable.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from pathlib import Path
from typing import Callable

from ..errors import ReplayMiss, TransportError


def request_digest(strategy: str, messages: list[dict[str, str]], temperature: float) -> str:
    """Stable hash of (strategy tag, message texts, temperature)."""
    h = hashlib.sha256()
    h.update(strategy.encode("utf-8"))
    for message in messages:
        h.update(b"\x00")
        h.update(message["role"].encode("utf-8"))
        h.update(b"\x1f")
        h.update(message["content"].encode("utf-8"))
    h.update(b"\x00")
    h.update(f"{temperature:.6f}".encode("ascii"))
    return h.hexdigest()


class TokenMeter:
    """Crude char-based token accounting, good enough for telemetry."""

    def __init__(self) -> None:
        self.prompt_tokens = 0
        self.completion_tokens = 0
        self._lock = threading.Lock()

    def add(self, messages: list[dict[str, str]], completion: str) -> None:
        with self._lock:
            self.prompt_tokens += sum(len(m["content"]) for m in messages) // 4
            self.completion_tokens += len(completion) // 4

    @property
    def total(self) -> int:
        return self.prompt_tokens + self.completion_tokens


class LiveTransport:
    """Chat-completions endpoint with bounded retries and backoff."""

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key_env: str = "LLM_API_KEY",
        max_retries: int = 3,
        backoff_seconds: float = 1.0,
        max_in_flight: int = 8,
        timeout_seconds: float = 120.0,
    ):
        key = os.environ.get(api_key_env, "")
        if not key:
            raise TransportError(
                f"live transport needs a credential in ${api_key_env}; none found"
            )
        self.base_url = base_url.rstrip("/")
        self.model = model
        self._key = key
        self.max_retries = max_retries
        self.backoff_seconds = backoff_seconds
        self.timeout_seconds = timeout_seconds
        self.network_calls = 0
        self.meter = TokenMeter()
        self._gate = threading.Semaphore(max_in_flight)

    def complete(self, digest: str, messages: list[dict[str, str]], temperature: float) -> str:
        import httpx

        payload = {"model": self.model, "messages": messages, "temperature": temperature}
        headers = {"Authorization": f"Bearer {self._key}"}
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            if attempt:
                time.sleep(self.backoff_seconds * (2 ** (attempt - 1)))
            try:
                with self._gate:
                    self.network_calls += 1
                    response = httpx.post(
                        f"{self.base_url}/chat/completions",
                        json=payload,
                        headers=headers,
                        timeout=self.timeout_seconds,
                    )
                if response.status_code == 200:
                    text = response.json()["choices"][0]["message"]["content"]
                    self.meter.add(messages, text)
                    return text
                last_error = TransportError(f"endpoint returned HTTP {response.status_code}")
                if response.status_code not in (429, 500, 502, 503, 504):
                    break
            except Exception as exc:  # network failure, malformed body, ...
                last_error = exc
        raise TransportError(f"completion failed after {self.max_retries} attempts: {last_error}")


class ReplayTransport:
    """Read-only transcript lookup; never touches the network."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.records: dict[str, str] = {}
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                self.records[obj["request_digest"]] = obj["response"]
        self.network_calls = 0
        self.meter = TokenMeter()

    def complete(self, digest: str, messages: list[dict[str, str]], temperature: float) -> str:
        try:
            text = self.records[digest]
        except KeyError:
            raise ReplayMiss(digest) from None
        self.meter.add(messages, text)
        return text


class RecordingTransport:
    """Wraps another transport and appends every exchange to a transcript."""

    def __init__(self, inner, path: str | Path):
        self.inner = inner
        self.path = Path(path)
        self._lock = threading.Lock()

    @property
    def network_calls(self) -> int:
        return self.inner.network_calls

    @property
    def meter(self) -> TokenMeter:
        return self.inner.meter

    def complete(self, digest: str, messages: list[dict[str, str]], temperature: float) -> str:
        text = self.inner.complete(digest, messages, temperature)
        record = json.dumps(
            {"request_digest": digest, "response": text}, ensure_ascii=False
        )
        with self._lock, self.path.open("a", encoding="utf-8") as fh:
            fh.write(record + "\n")
        return text


class ScriptedTransport:
    """Deterministic function-backed transport for scenario runs and tests."""

    def __init__(self, script: Callable[[list[dict[str, str]], str], str]):
        self.script = script
        self.network_calls = 0
        self.meter = TokenMeter()

    def complete(self, digest: str, messages: list[dict[str, str]], temperature: float) -> str:
        text = self.script(messages, digest)
        self.meter.add(messages, text)
        return text
