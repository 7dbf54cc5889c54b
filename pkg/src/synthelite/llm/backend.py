"""Provider-agnostic chat completion with retries, rate limiting and a call ledger."""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

from .errors import BackendError

Message = dict[str, str]  # {"role": ..., "content": ...}


class LlmBackend(Protocol):
    name: str

    def complete_once(self, messages: list[Message]) -> str: ...


def messages_text(messages: list[Message]) -> str:
    return "\n".join(f"[{m['role']}]\n{m['content']}" for m in messages)


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class CallLedger:
    """Append-only record of every backend call; optionally mirrored to JSONL."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self.records: list[dict] = []
        self._lock = threading.Lock()

    def record(self, backend: str, prompt: str, response: str, latency_ms: float) -> None:
        entry = {
            "ts": time.time(),
            "backend": backend,
            "prompt_sha256": _sha(prompt),
            "response_sha256": _sha(response),
            "latency_ms": round(latency_ms, 3),
        }
        with self._lock:
            self.records.append(entry)
            if self.path is not None:
                with self.path.open("a", encoding="utf-8") as f:
                    f.write(json.dumps(entry, sort_keys=True) + "\n")

    def __len__(self) -> int:
        return len(self.records)


class RateLimiter:
    """Token bucket shared per provider name."""

    _buckets: dict[str, "RateLimiter"] = {}
    _registry_lock = threading.Lock()

    def __init__(self, per_minute: float):
        self.capacity = max(1.0, per_minute)
        self.tokens = self.capacity
        self.rate = per_minute / 60.0
        self.updated = time.monotonic()
        self._lock = threading.Lock()

    @classmethod
    def for_provider(cls, name: str, per_minute: float) -> "RateLimiter":
        with cls._registry_lock:
            if name not in cls._buckets:
                cls._buckets[name] = cls(per_minute)
            return cls._buckets[name]

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                self.tokens = min(self.capacity, self.tokens + (now - self.updated) * self.rate)
                self.updated = now
                if self.tokens >= 1.0:
                    self.tokens -= 1.0
                    return
                wait = (1.0 - self.tokens) / self.rate
            time.sleep(min(wait, 1.0))


@dataclass
class RetryPolicy:
    base_delay: float = 0.05
    max_delay: float = 10.0

    def delay(self, attempt: int) -> float:
        return min(self.max_delay, self.base_delay * (2 ** attempt))


def complete(backend: LlmBackend, messages: list[Message], retry_budget: int = 2,
             ledger: CallLedger | None = None, limiter: RateLimiter | None = None,
             retry_policy: RetryPolicy | None = None) -> str:
    """Chat completion with exponential-backoff retries on transport failure."""
    if retry_budget < 0:
        raise ValueError("retry_budget must be >= 0")
    policy = retry_policy or RetryPolicy()
    prompt = messages_text(messages)
    last: Exception | None = None
    for attempt in range(retry_budget + 1):
        if limiter is not None:
            limiter.acquire()
        start = time.monotonic()
        try:
            response = backend.complete_once(messages)
        except Exception as exc:  # transport failures are backend-specific
            last = exc
            if attempt < retry_budget:
                time.sleep(policy.delay(attempt))
            continue
        if ledger is not None:
            ledger.record(backend.name, prompt, response,
                          (time.monotonic() - start) * 1000.0)
        return response
    raise BackendError(f"backend {backend.name} failed after "
                       f"{retry_budget + 1} attempts: {last}")


class CallableBackend:
    """Adapter for a plain function, mostly used in tests."""

    def __init__(self, name: str, fn: Callable[[list[Message]], str]):
        self.name = name
        self._fn = fn

    def complete_once(self, messages: list[Message]) -> str:
        return self._fn(messages)
