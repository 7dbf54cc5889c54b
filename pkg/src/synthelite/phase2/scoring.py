"""Action scoring: similarity/popularity mixed logits and softmax priors."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..index import popularity_prior


@dataclass(frozen=True)
class ScoringParams:
    alpha: float = 0.5           # strategy-alignment vs popularity balance
    scale_c: float = 100.0       # occurrence saturation constant
    iterations: int = 300
    exploration_c: float = 1.4
    depth_slack: int = 5         # how far past the blueprint the tree may grow
    top_k: int = 50              # retrieval width per depth

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.scale_c <= 0:
            raise ValueError("scale constant must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.exploration_c <= 0:
            raise ValueError("exploration constant must be positive")


def action_logit(sim: float, count: int, params: ScoringParams) -> float:
    """alpha * sim + (1 - alpha) * count/(count + C)."""
    return params.alpha * sim + (1.0 - params.alpha) * popularity_prior(count, params.scale_c)


def softmax(logits: list[float]) -> list[float]:
    if not logits:
        return []
    peak = max(logits)
    exps = [math.exp(z - peak) for z in logits]
    total = sum(exps)
    return [e / total for e in exps]
