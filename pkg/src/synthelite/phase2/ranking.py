"""Blueprint alignment and the final route ordering."""

from __future__ import annotations

from dataclasses import dataclass

from ..phase1 import Blueprint
from ..routes import Route


@dataclass
class RouteCandidate:
    route: Route
    alignment: float
    attempt_index: int  # 1-based provenance
    solved: bool

    def to_dict(self) -> dict:
        from ..routes import route_to_dict

        return {
            "route": route_to_dict(self.route),
            "alignment": self.alignment,
            "attempt_index": self.attempt_index,
            "solved": self.solved,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RouteCandidate":
        from ..routes import route_from_dict

        return cls(route=route_from_dict(data["route"]),
                   alignment=float(data["alignment"]),
                   attempt_index=int(data["attempt_index"]),
                   solved=bool(data["solved"]))


def alignment_score(route: Route, blueprint: Blueprint) -> float:
    """Fraction of blueprint reactions present in the route.

    Presence is equality of (template id, product SMILES); an empty blueprint
    scores zero by convention.
    """
    if blueprint.depth == 0:
        return 0.0
    have = {(r.template_id, r.product_smiles) for r in route.reactions()}
    hits = sum(1 for s in blueprint.steps
               if (s.ref_reaction.template_id, s.ref_reaction.product.smiles) in have)
    return hits / blueprint.depth


def _sort_key(candidate: RouteCandidate, total_attempts: int):
    recency = candidate.alignment * (candidate.attempt_index / total_attempts)
    return (-int(candidate.solved), -recency, candidate.route.length(),
            candidate.route.route_hash())


def rank_routes(candidates: list[RouteCandidate],
                total_attempts: int) -> list[RouteCandidate]:
    """Solved first, then alignment weighted toward later attempts; duplicates
    (same reaction multiset) collapse onto the strongest key."""
    if total_attempts < 1:
        raise ValueError("total_attempts must be >= 1")
    best: dict[tuple, RouteCandidate] = {}
    for cand in candidates:
        key = cand.route.reaction_multiset()
        held = best.get(key)
        if held is None or _sort_key(cand, total_attempts) < _sort_key(held, total_attempts):
            best[key] = cand
    ordered = sorted(best.values(), key=lambda c: _sort_key(c, total_attempts))
    return ordered
