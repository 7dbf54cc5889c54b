"""HTTP chat adapters and the SYNTHELITE_LLM backend selector.

Credentials come from environment variables:

* ``openai:<model>``    -> OPENAI_API_KEY, optional OPENAI_BASE_URL
* ``anthropic:<model>`` -> ANTHROPIC_API_KEY, optional ANTHROPIC_BASE_URL
* ``scripted:<file>``   -> deterministic JSONL rules, no network
"""

from __future__ import annotations

import os

from .backend import LlmBackend, Message
from .errors import BackendError
from .scripted import ScriptedBackend

DEFAULT_BACKEND_ENV = "SYNTHELITE_LLM"


class OpenAIChatBackend:
    def __init__(self, model: str, api_key: str | None = None, base_url: str | None = None):
        self.name = f"openai:{model}"
        self.model = model
        self.api_key = api_key or os.environ.get("OPENAI_API_KEY", "")
        self.base_url = (base_url or os.environ.get("OPENAI_BASE_URL")
                         or "https://api.openai.com/v1")

    def complete_once(self, messages: list[Message]) -> str:
        import httpx

        if not self.api_key:
            raise BackendError("OPENAI_API_KEY is not set")
        resp = httpx.post(
            f"{self.base_url.rstrip('/')}/chat/completions",
            headers={"Authorization": f"Bearer {self.api_key}"},
            json={"model": self.model, "messages": messages},
            timeout=120.0,
        )
        resp.raise_for_status()
        return resp.json()["choices"][0]["message"]["content"]


class AnthropicChatBackend:
    def __init__(self, model: str, api_key: str | None = None, base_url: str | None = None):
        self.name = f"anthropic:{model}"
        self.model = model
        self.api_key = api_key or os.environ.get("ANTHROPIC_API_KEY", "")
        self.base_url = (base_url or os.environ.get("ANTHROPIC_BASE_URL")
                         or "https://api.anthropic.com")

    def complete_once(self, messages: list[Message]) -> str:
        import httpx

        if not self.api_key:
            raise BackendError("ANTHROPIC_API_KEY is not set")
        system = "\n".join(m["content"] for m in messages if m["role"] == "system")
        chat = [m for m in messages if m["role"] != "system"]
        resp = httpx.post(
            f"{self.base_url.rstrip('/')}/v1/messages",
            headers={"x-api-key": self.api_key, "anthropic-version": "2023-06-01"},
            json={"model": self.model, "system": system, "messages": chat,
                  "max_tokens": 8192},
            timeout=120.0,
        )
        resp.raise_for_status()
        return "".join(block.get("text", "") for block in resp.json()["content"])


def backend_from_spec(spec: str | None = None) -> LlmBackend:
    """Build a backend from a ``kind:arg`` spec or the SYNTHELITE_LLM env var."""
    spec = spec or os.environ.get(DEFAULT_BACKEND_ENV, "")
    if not spec:
        raise BackendError(
            f"no LLM backend configured; set {DEFAULT_BACKEND_ENV} or pass --llm")
    kind, _, arg = spec.partition(":")
    if kind == "scripted":
        if not arg:
            raise BackendError("scripted backend needs a rules file: scripted:FILE")
        return ScriptedBackend.from_file(arg)
    if kind == "openai":
        return OpenAIChatBackend(arg or "gpt-4o")
    if kind == "anthropic":
        return AnthropicChatBackend(arg or "claude-sonnet-4-5")
    raise BackendError(f"unknown backend spec {spec!r}")
