"""JSON forms of planner results for on-disk attempt records."""

from __future__ import annotations

from ..chem import Molecule, RetroReaction
from ..llm import Feedback
from .planner import AttemptResult, Blueprint, BlueprintStep, PlannerState


def reaction_to_dict(rxn: RetroReaction) -> dict:
    return {
        "product": rxn.product.smiles,
        "reactants": [m.smiles for m in rxn.reactants],
        "template_id": rxn.template_id,
        "site": sorted(rxn.site),
    }


def reaction_from_dict(data: dict) -> RetroReaction:
    return RetroReaction(
        product=Molecule(data["product"]),
        reactants=tuple(Molecule(s) for s in data["reactants"]),
        template_id=data["template_id"],
        site=frozenset(data["site"]),
    )


def blueprint_to_dict(bp: Blueprint) -> dict:
    return {"steps": [{
        "depth": s.depth,
        "ref_reaction": reaction_to_dict(s.ref_reaction),
        "query": s.query,
    } for s in bp.steps]}


def blueprint_from_dict(data: dict) -> Blueprint:
    return Blueprint(steps=tuple(
        BlueprintStep(depth=s["depth"],
                      ref_reaction=reaction_from_dict(s["ref_reaction"]),
                      query=s["query"])
        for s in data["steps"]))


def attempt_to_dict(attempt: AttemptResult) -> dict:
    return {
        "index": attempt.index,
        "blueprint": blueprint_to_dict(attempt.blueprint),
        "final_state": {
            "target": attempt.final_state.target.smiles,
            "frontier": [[m.smiles, avail] for m, avail in attempt.final_state.frontier],
            "reactions": [reaction_to_dict(r) for r in attempt.final_state.reactions],
        },
        "solved": attempt.solved,
        "stop_reason": attempt.stop_reason,
        "feedback": attempt.feedback.to_dict() if attempt.feedback else None,
        "user_feedback": attempt.user_feedback,
    }


def attempt_from_dict(data: dict) -> AttemptResult:
    fs = data["final_state"]
    state = PlannerState(
        target=Molecule(fs["target"]),
        frontier=[(Molecule(s), bool(avail)) for s, avail in fs["frontier"]],
        reactions=[reaction_from_dict(r) for r in fs["reactions"]],
    )
    return AttemptResult(
        index=data["index"],
        blueprint=blueprint_from_dict(data["blueprint"]),
        final_state=state,
        solved=data["solved"],
        stop_reason=data["stop_reason"],
        feedback=Feedback.from_dict(data["feedback"]) if data.get("feedback") else None,
        user_feedback=data.get("user_feedback", ""),
    )
