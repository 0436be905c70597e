"""Chat-completion providers: live HTTP, recording, and replay.

Fixtures are content-addressed by a hash of the full rendered message
sequence so any prompt drift invalidates them loudly instead of
silently replaying stale replies.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from ..errors import FixtureMissing, ProviderUnavailable
from .templates import Message


@dataclass(frozen=True)
class ProviderReply:
    raw_text: str
    input_tokens: int
    output_tokens: int
    latency_ms: int


class Provider(Protocol):
    def send(
        self,
        messages: list[Message],
        *,
        model_id: str,
        temperature: float,
        max_output_tokens: int,
    ) -> ProviderReply: ...


def fixture_key(messages: list[Message]) -> str:
    """Content address of a rendered message sequence."""
    canonical = json.dumps(messages, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _estimate_tokens(text: str) -> int:
    # Rough chars/4 heuristic; deterministic so replay runs stay stable.
    return max(0, math.ceil(len(text) / 4))


class ReplayProvider:
    """Serves recorded replies from the fixture store; never touches the
    network. One file per key: filename is the hex key, content the raw
    reply bytes."""

    def __init__(self, store_path: str | Path):
        self.store_path = Path(store_path)

    def send(self, messages, *, model_id, temperature, max_output_tokens):
        key = fixture_key(messages)
        path = self.store_path / key
        if not path.is_file():
            raise FixtureMissing(key)
        raw = path.read_text(encoding="utf-8")
        prompt_chars = sum(len(m["content"]) for m in messages)
        return ProviderReply(
            raw_text=raw,
            input_tokens=max(0, math.ceil(prompt_chars / 4)),
            output_tokens=_estimate_tokens(raw),
            latency_ms=0,
        )


class RecordingProvider:
    """Wraps a live provider and persists each reply under its key."""

    def __init__(self, inner: Provider, store_path: str | Path):
        self.inner = inner
        self.store_path = Path(store_path)
        self._lock = threading.Lock()

    def send(self, messages, *, model_id, temperature, max_output_tokens):
        reply = self.inner.send(
            messages,
            model_id=model_id,
            temperature=temperature,
            max_output_tokens=max_output_tokens,
        )
        key = fixture_key(messages)
        with self._lock:
            self.store_path.mkdir(parents=True, exist_ok=True)
            (self.store_path / key).write_text(reply.raw_text, encoding="utf-8")
        return reply


class RateLimiter:
    """Token bucket limiting requests per minute for one provider."""

    def __init__(self, requests_per_minute: float, clock=time.monotonic, sleep=time.sleep):
        if requests_per_minute <= 0:
            raise ValueError("requests_per_minute must be positive")
        self.capacity = requests_per_minute
        self.rate = requests_per_minute / 60.0
        self.tokens = float(requests_per_minute)
        self._clock = clock
        self._sleep = sleep
        self._last = clock()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        with self._lock:
            while True:
                now = self._clock()
                self.tokens = min(self.capacity, self.tokens + (now - self._last) * self.rate)
                self._last = now
                if self.tokens >= 1.0:
                    self.tokens -= 1.0
                    return
                self._sleep((1.0 - self.tokens) / self.rate)


class LiveProvider:
    """OpenAI-compatible chat completions over HTTP.

    The credential is read from the named environment variable at call
    time and is never logged or echoed.
    """

    def __init__(
        self,
        base_url: str,
        api_key_env: str = "MOFMINER_API_KEY",
        rate_limiter: RateLimiter | None = None,
        timeout: float = 60.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.rate_limiter = rate_limiter
        self.timeout = timeout

    def send(self, messages, *, model_id, temperature, max_output_tokens):
        import httpx

        if self.rate_limiter is not None:
            self.rate_limiter.acquire()
        headers = {}
        api_key = os.environ.get(self.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        body = {
            "model": model_id,
            "messages": messages,
            "temperature": temperature,
            "max_tokens": max_output_tokens,
        }
        started = time.monotonic()
        try:
            resp = httpx.post(
                f"{self.base_url}/chat/completions",
                json=body,
                headers=headers,
                timeout=self.timeout,
            )
            resp.raise_for_status()
            data = resp.json()
            usage = data.get("usage", {})
            text = data["choices"][0]["message"]["content"]
        except Exception as exc:
            raise ProviderUnavailable(f"chat endpoint unreachable or malformed: {exc}") from exc
        return ProviderReply(
            raw_text=text,
            input_tokens=int(usage.get("prompt_tokens", _estimate_tokens(str(messages)))),
            output_tokens=int(usage.get("completion_tokens", _estimate_tokens(text))),
            latency_ms=int((time.monotonic() - started) * 1000),
        )
