"""Prompt templates with {{VAR}} substitution, loaded from packaged assets."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import MissingVarError

_VAR_RE = re.compile(r"\{\{([A-Za-z0-9_]+)\}\}")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    body: str
    required_vars: frozenset[str] = field(default=frozenset())

    @classmethod
    def from_text(cls, name: str, body: str) -> "PromptTemplate":
        return cls(name=name, body=body,
                   required_vars=frozenset(_VAR_RE.findall(body)))


def render(template: PromptTemplate, variables: dict[str, str]) -> str:
    """Substitute every placeholder exactly once; values go in verbatim."""
    missing = template.required_vars - set(variables)
    if missing:
        raise MissingVarError(sorted(missing)[0])

    def sub(m: re.Match) -> str:
        return str(variables[m.group(1)])

    text = _VAR_RE.sub(sub, template.body)
    return text


def load_prompt(name: str) -> PromptTemplate:
    """Load a packaged prompt asset by stem name (e.g. "planner_role")."""
    ref = resources.files("synthelite.assets.prompts").joinpath(f"{name}.txt")
    return PromptTemplate.from_text(name, ref.read_text(encoding="utf-8"))


def neutral_prompt() -> str:
    return load_prompt("neutral_prompt").body.strip()
