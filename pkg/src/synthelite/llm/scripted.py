"""Deterministic scripted backend driven by a JSONL rule ledger.

Each rule is ``{"match": <substring or "sha256:<hex>" or "*">, "response":
<text>}``; rules apply first-match in file order against the concatenated
prompt text.  The same rules file plus the same messages always produce the
same response, which makes whole planning runs reproducible.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .backend import Message, messages_text
from .errors import BackendError


class ScriptedBackend:
    def __init__(self, rules: list[dict], name: str = "scripted"):
        self.name = name
        self.rules = rules
        for i, rule in enumerate(rules):
            if "match" not in rule or "response" not in rule:
                raise ValueError(f"scripted rule {i} needs 'match' and 'response'")

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedBackend":
        rules = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            rules.append(json.loads(line))
        return cls(rules, name=f"scripted:{Path(path).name}")

    def complete_once(self, messages: list[Message]) -> str:
        prompt = messages_text(messages)
        digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()
        for rule in self.rules:
            pattern = rule["match"]
            if pattern == "*":
                return rule["response"]
            if pattern.startswith("sha256:"):
                if pattern[len("sha256:"):] == digest:
                    return rule["response"]
                continue
            if pattern in prompt:
                return rule["response"]
        raise BackendError(f"no scripted rule matched prompt sha256:{digest}")


class FlakyBackend:
    """Wraps a backend, failing the first ``failures`` calls (test helper)."""

    def __init__(self, inner, failures: int):
        self.name = f"flaky({inner.name})"
        self.inner = inner
        self.remaining = failures

    def complete_once(self, messages: list[Message]) -> str:
        if self.remaining > 0:
            self.remaining -= 1
            raise ConnectionError("transient transport failure")
        return self.inner.complete_once(messages)


class SequenceBackend:
    """Returns scripted responses in order, repeating the last one.

    Stands in for distinct sampling seeds when a protocol calls the same
    prompt several times and expects run-to-run variation.
    """

    def __init__(self, responses: list[str], name: str = "sequence"):
        if not responses:
            raise ValueError("need at least one response")
        self.name = name
        self.responses = list(responses)
        self.calls = 0

    def complete_once(self, messages: list[Message]) -> str:
        idx = min(self.calls, len(self.responses) - 1)
        self.calls += 1
        return self.responses[idx]
