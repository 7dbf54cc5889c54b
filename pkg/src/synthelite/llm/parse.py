"""Strict parsers for every tagged block in the planning protocol."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import FormatError, PlanParseError, TagMissingError


def extract_tag(text: str, tag: str) -> str:
    """Inner text of the first <tag>...</tag> pair, whitespace-trimmed.

    Models sometimes echo the instructions, so only the first block counts.
    """
    m = re.search(rf"<{re.escape(tag)}>(.*?)</{re.escape(tag)}>", text, re.DOTALL)
    if m is None:
        raise TagMissingError(f"tag <{tag}> not found or unclosed")
    return m.group(1).strip()


def parse_stop(text: str) -> bool:
    """True iff a stop_signal tag exists and says TRUE; no tag means continue."""
    try:
        content = extract_tag(text, "stop_signal")
    except TagMissingError:
        return False
    return content.strip().upper() == "TRUE"


def parse_int_list(text: str, tag: str) -> list[int]:
    """Bracketed comma-separated integers inside the tag; a bare integer is a
    singleton list."""
    content = extract_tag(text, tag)
    stripped = content.strip()
    if stripped.startswith("[") and stripped.endswith("]"):
        inner = stripped[1:-1].strip()
        if not inner:
            return []
        parts = [p.strip() for p in inner.split(",")]
    else:
        parts = [stripped]
    out = []
    for p in parts:
        if not re.fullmatch(r"[+-]?\d+", p):
            raise FormatError(f"non-integer entry {p!r} in <{tag}>")
        out.append(int(p))
    return out


@dataclass
class PlanStep:
    step_number: int
    step_description: str
    step_reaction: str = ""


@dataclass
class SynthesisPlan:
    target_smiles: str = ""
    expandable_molecules: object = None
    user_constraint: str = ""
    previous_steps: list[PlanStep] = field(default_factory=list)
    strategy_overview: str = ""
    step_estimate: str = ""
    next_steps: list[PlanStep] = field(default_factory=list)
    additional_notes: str = ""


@dataclass
class FeedbackItem:
    step_id: int
    feedback: str


@dataclass
class Feedback:
    overall_feedback: str = ""
    problematic_steps: list[FeedbackItem] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not self.overall_feedback and not self.problematic_steps

    def to_dict(self) -> dict:
        return {"overall_feedback": self.overall_feedback,
                "problematic_steps": [
                    {"step_id": it.step_id, "feedback": it.feedback}
                    for it in self.problematic_steps]}

    @classmethod
    def from_dict(cls, data: dict) -> "Feedback":
        return cls(
            overall_feedback=str(data.get("overall_feedback", "")),
            problematic_steps=[
                FeedbackItem(step_id=int(it["step_id"]), feedback=str(it.get("feedback", "")))
                for it in data.get("problematic_steps", [])])


def _strip_json_comments(text: str) -> str:
    """Drop //-to-end-of-line comments that are not inside a string literal."""
    out = []
    in_string = False
    escape = False
    i = 0
    while i < len(text):
        ch = text[i]
        if in_string:
            out.append(ch)
            if escape:
                escape = False
            elif ch == "\\":
                escape = True
            elif ch == '"':
                in_string = False
            i += 1
            continue
        if ch == '"':
            in_string = True
            out.append(ch)
            i += 1
            continue
        if ch == "/" and i + 1 < len(text) and text[i + 1] == "/":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        out.append(ch)
        i += 1
    return "".join(out)


def _strip_trailing_commas(text: str) -> str:
    return re.sub(r",(\s*[}\]])", r"\1", text)


def _lenient_json(content: str) -> dict:
    cleaned = _strip_trailing_commas(_strip_json_comments(content))
    try:
        data = json.loads(cleaned)
    except json.JSONDecodeError as exc:
        raise PlanParseError(f"invalid JSON payload: {exc}") from exc
    if not isinstance(data, dict):
        raise PlanParseError("JSON payload is not an object")
    return data


def parse_plan(text: str) -> SynthesisPlan:
    content = extract_tag(text, "synthesis_plan")
    data = _lenient_json(content)

    def steps(key: str) -> list[PlanStep]:
        out = []
        for item in data.get(key, []) or []:
            if not isinstance(item, dict):
                raise PlanParseError(f"{key} entries must be objects")
            try:
                num = int(item["step_number"])
            except (KeyError, TypeError, ValueError) as exc:
                raise PlanParseError(f"bad step_number in {key}") from exc
            out.append(PlanStep(
                step_number=num,
                step_description=str(item.get("step_description", "")),
                step_reaction=str(item.get("step_reaction", "")),
            ))
        return out

    plan = SynthesisPlan(
        target_smiles=str(data.get("target_smiles", "")),
        expandable_molecules=data.get("expandable_molecules"),
        user_constraint=str(data.get("user_constraint", "")),
        previous_steps=steps("previous_steps"),
        strategy_overview=str(data.get("strategy_overview", "")),
        step_estimate=str(data.get("step_estimate", "")),
        next_steps=steps("next_steps"),
        additional_notes=str(data.get("additional_notes", "")),
    )
    numbers = [s.step_number for s in plan.previous_steps + plan.next_steps]
    if any(b <= a for a, b in zip(numbers, numbers[1:])):
        raise PlanParseError("step_number values must be strictly increasing")
    return plan


def parse_feedback(text: str) -> Feedback:
    content = extract_tag(text, "feedback")
    data = _lenient_json(content)
    if "overall_feedback" not in data:
        raise PlanParseError("feedback payload lacks overall_feedback")
    items = []
    for it in data.get("problematic_steps", []) or []:
        if not isinstance(it, dict) or "step_id" not in it:
            raise PlanParseError("problematic_steps entries need step_id")
        try:
            sid = int(it["step_id"])
        except (TypeError, ValueError) as exc:
            raise PlanParseError("step_id must be an integer") from exc
        items.append(FeedbackItem(step_id=sid, feedback=str(it.get("feedback", ""))))
    return Feedback(overall_feedback=str(data["overall_feedback"]),
                    problematic_steps=items)
