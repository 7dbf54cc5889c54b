"""Phase 2: similarity-weighted MCTS refinement of phase-1 blueprints."""

from .actions import ActionCache, ScoredAction, candidate_actions
from .mcts import SearchNode, run_search
from .ranking import RouteCandidate, alignment_score, rank_routes
from .scoring import ScoringParams, action_logit, softmax

__all__ = [
    "ActionCache", "ScoredAction", "candidate_actions",
    "SearchNode", "run_search",
    "RouteCandidate", "alignment_score", "rank_routes",
    "ScoringParams", "action_logit", "softmax",
]
