"""Prompt assembly for the stepwise planning conversation."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING

from ..chem import Molecule, map_atoms
from ..llm import Message, load_prompt, render

if TYPE_CHECKING:
    from .planner import AttemptResult, PlannerState

CORRECTION_NOTE = (
    "Your previous answer could not be used: {reason}. "
    "Please redo the tasks and answer again in exactly the requested format.")


def frontier_block(frontier: list[tuple[Molecule, bool]], mapped: bool) -> str:
    lines = []
    for i, (mol, available) in enumerate(frontier):
        text = map_atoms(mol).smiles if mapped else mol.smiles
        lines.append(f"{i}: {text} ({'in stock' if available else 'not in stock'})")
    return "\n".join(lines) if lines else "[]"


def reactions_block(state: "PlannerState") -> str:
    if not state.reactions:
        return "[]"
    return "\n".join(f"{i}. {r.retro_smiles}" for i, r in enumerate(state.reactions, 1))


def previous_attempts_block(history: list["AttemptResult"]) -> str:
    if not history:
        return "No previous attempts."
    chunks = []
    for attempt in history:
        lines = [f"Attempt {attempt.index} "
                 f"(solved={str(attempt.solved).lower()}, stop_reason={attempt.stop_reason}):"]
        if attempt.blueprint.steps:
            for step in attempt.blueprint.steps:
                lines.append(f"  Step {step.depth}: {step.ref_reaction.retro_smiles}")
        else:
            lines.append("  (no reactions)")
        if attempt.feedback is not None and not attempt.feedback.is_empty():
            lines.append("Feedback: " + json.dumps(attempt.feedback.to_dict(), sort_keys=True))
        if attempt.user_feedback:
            lines.append("USER: " + attempt.user_feedback)
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks)


def combined_messages(state: "PlannerState", user_prompt: str,
                      history: list["AttemptResult"]) -> list[Message]:
    """One call carrying the stop check, the plan, and the next-step tasks."""
    parts = [
        render(load_prompt("planner_input"), {
            "TARGET_MOLECULE": state.target.smiles,
            "USER_PROMPT": user_prompt,
        }),
    ]
    if history:
        parts.append(render(load_prompt("planner_previous_attempts"), {
            "PREVIOUS_ATTEMPTS": previous_attempts_block(history),
        }))
    parts.append(render(load_prompt("planner_state"), {
        "PREVIOUS_REACTIONS": reactions_block(state),
        "CURRENT_MOLECULE_SMILES": frontier_block(state.frontier, mapped=False),
        "CURRENT_MOLECULE_SMILES_MAPPED": frontier_block(state.frontier, mapped=True),
    }))
    parts.append(load_prompt("planner_task_stop").body)
    parts.append(load_prompt("planner_task_plan").body)
    parts.append(load_prompt("planner_task_next").body)
    return [
        {"role": "system", "content": load_prompt("planner_role").body},
        {"role": "user", "content": "\n".join(parts)},
    ]


def search_result_block(candidates, index) -> str:
    lines = []
    for i, rxn in enumerate(candidates):
        desc = index.record(rxn.template_id).description
        lines.append(f"{i}: {rxn.forward_smiles} | {desc}")
    return "\n".join(lines)


def selection_messages(conversation: list[Message], response: str,
                       candidates, index, select_count: int) -> list[Message]:
    block = search_result_block(candidates, index)
    follow_up = render(load_prompt("planner_select"), {
        "SEARCH_RESULT": block,
        "MAX_SELECTS_REACTIONS": str(select_count),
    })
    return conversation + [
        {"role": "assistant", "content": response},
        {"role": "user", "content": follow_up},
    ]


def evaluation_messages(target: Molecule, user_prompt: str,
                        attempt: "AttemptResult") -> list[Message]:
    plan_lines = [f"Step {s.depth}: {s.ref_reaction.retro_smiles}"
                  for s in attempt.blueprint.steps]
    body = "\n".join([
        render(load_prompt("eval_input"), {
            "TARGET_MOLECULE": target.smiles,
            "USER_PROMPT": user_prompt,
            "PROPOSED_SYNTHESIS_PLAN": "\n".join(plan_lines),
        }),
        load_prompt("eval_instruction").body,
    ])
    return [
        {"role": "system", "content": load_prompt("eval_role").body},
        {"role": "user", "content": body},
    ]
