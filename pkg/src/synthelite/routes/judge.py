"""LLM feasibility judging: score 1..10 per run, keep the best of three.

Judges misread reaction SMILES often enough that a single low score can be a
false negative, so the protocol is optimistic: several independent runs, max
score wins.
"""

from __future__ import annotations

import re

from ..llm import (
    CallLedger, LlmBackend, TagMissingError, complete, extract_tag, load_prompt,
    render,
)
from .model import Route

JUDGE_RUNS = 3


class ScoreParseError(ValueError):
    """A judge run produced no usable integer in [1, 10]."""


def _judge_messages(route: Route) -> list[dict]:
    lines = [f"Step {d}: {r.retro_smiles}" for r, d in route.reactions_with_depth()]
    body = render(load_prompt("judge_instruction"), {
        "ROUTE": "\n".join(lines),
        "TARGET_MOLECULE": route.root.smiles,
    })
    return [
        {"role": "system", "content": load_prompt("judge_role").body},
        {"role": "user", "content": body},
    ]


def _parse_score(response: str) -> int:
    try:
        content = extract_tag(response, "feasibility_score")
    except TagMissingError:
        content = response
    m = re.search(r"-?\d+", content)
    if m is None:
        raise ScoreParseError(f"no integer score in response: {response[:80]!r}")
    score = int(m.group())
    if not 1 <= score <= 10:
        raise ScoreParseError(f"score {score} outside 1..10")
    return score


def judge_feasibility(route: Route, llm: LlmBackend, runs: int = JUDGE_RUNS,
                      ledger: CallLedger | None = None) -> int:
    """Max score over ``runs`` independent judge calls."""
    if not route.reactions():
        raise ValueError("cannot judge a route with no reactions")
    messages = _judge_messages(route)
    scores: list[int] = []
    for _ in range(runs):
        response = complete(llm, messages, retry_budget=2, ledger=ledger)
        try:
            scores.append(_parse_score(response))
        except ScoreParseError:
            retry = complete(llm, messages + [
                {"role": "assistant", "content": response},
                {"role": "user", "content":
                    "Answer again with a single integer from 1 to 10 inside "
                    "<feasibility_score> tags."},
            ], retry_budget=2, ledger=ledger)
            scores.append(_parse_score(retry))  # raises after the one retry
    return max(scores)
