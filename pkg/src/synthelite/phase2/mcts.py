"""PUCT tree search over blueprint-guided disconnections.

No rollouts: a node's value is the in-stock fraction of its frontier, which
is what the search optimizes.  Terminals are fully purchasable frontiers
(value 1), depth exhaustion, and action-less dead ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..chem import Molecule, RetroReaction, Stock
from ..index import TemplateIndex
from ..phase1 import Blueprint
from ..routes import Route, route_from_reactions
from .actions import ActionCache, ScoredAction, candidate_actions
from .ranking import RouteCandidate, alignment_score
from .scoring import ScoringParams


@dataclass
class SearchNode:
    frontier: list[tuple[Molecule, bool]]
    depth: int
    visit_count: int = 0
    value_sum: float = 0.0
    actions: list[ScoredAction] | None = None  # None until expanded
    children: dict[int, "SearchNode"] = field(default_factory=dict)
    path: tuple[RetroReaction, ...] = ()

    def stock_fraction(self) -> float:
        if not self.frontier:
            return 1.0
        return sum(1 for _, ok in self.frontier if ok) / len(self.frontier)

    def solved(self) -> bool:
        return all(ok for _, ok in self.frontier)

    def q(self) -> float:
        return self.value_sum / self.visit_count if self.visit_count else 0.0


def _expansion_molecule(node: SearchNode, blueprint: Blueprint) -> Molecule | None:
    """Molecule to disconnect next: the blueprint's product at this depth when
    it is still on the frontier, else the first unpurchasable molecule."""
    depth = node.depth + 1
    if depth <= blueprint.depth:
        ref_product = blueprint.step_at(depth).ref_reaction.product.smiles
        for mol, _ in node.frontier:
            if mol.smiles == ref_product:
                return mol
    for mol, ok in node.frontier:
        if not ok:
            return mol
    return None


def _apply_action(node: SearchNode, action: ScoredAction, stock: Stock) -> SearchNode:
    rxn = action.reaction
    idx = next(i for i, (m, _) in enumerate(node.frontier)
               if m.smiles == rxn.product.smiles)
    frontier = node.frontier[:idx] + node.frontier[idx + 1:]
    frontier = frontier + [(m, m in stock) for m in rxn.reactants]
    return SearchNode(frontier=frontier, depth=node.depth + 1,
                      path=node.path + (rxn,))


def run_search(blueprint: Blueprint, target: Molecule, stock: Stock,
               index: TemplateIndex, params: ScoringParams | None = None,
               attempt_index: int = 1) -> list[RouteCandidate]:
    """Iterated select/expand/evaluate/backpropagate toward full stock coverage.

    Returns every distinct solved route discovered; when nothing solves, the
    best partial route (highest stock fraction, then shortest) stands in.
    """
    params = params or ScoringParams()
    cache = ActionCache()
    max_depth = blueprint.depth + params.depth_slack

    root = SearchNode(frontier=[(target, target in stock)], depth=0)
    solved: dict[tuple, SearchNode] = {}
    best_unsolved: SearchNode = root

    def consider(node: SearchNode) -> None:
        nonlocal best_unsolved
        if node.solved():
            key = tuple(sorted(r.retro_smiles + "|" + r.template_id for r in node.path))
            solved.setdefault(key, node)
        else:
            better = (node.stock_fraction(), -len(node.path)) > (
                best_unsolved.stock_fraction(), -len(best_unsolved.path))
            if better:
                best_unsolved = node

    def is_terminal(node: SearchNode) -> bool:
        if node.solved() or node.depth >= max_depth:
            return True
        return node.actions is not None and not node.actions

    def expand(node: SearchNode) -> None:
        mol = _expansion_molecule(node, blueprint)
        if mol is None:
            node.actions = []
            return
        node.actions = candidate_actions(mol, node.depth + 1, blueprint,
                                         index, cache, params)

    consider(root)
    for _ in range(params.iterations):
        node = root
        trail = [root]
        # selection: descend through expanded, non-terminal nodes
        while not is_terminal(node) and node.actions is not None:
            best_i, best_score = -1, -math.inf
            sqrt_n = math.sqrt(max(1, node.visit_count))
            for i, action in enumerate(node.actions):
                child = node.children.get(i)
                q = child.q() if child else 0.0
                n = child.visit_count if child else 0
                score = q + params.exploration_c * action.prior * sqrt_n / (1 + n)
                if score > best_score:
                    best_i, best_score = i, score
            if best_i in node.children:
                node = node.children[best_i]
                trail.append(node)
            else:
                child = _apply_action(node, node.actions[best_i], stock)
                node.children[best_i] = child
                consider(child)
                node = child
                trail.append(node)
                break
        # expansion + evaluation
        if not is_terminal(node) and node.actions is None:
            expand(node)
        value = 1.0 if node.solved() else node.stock_fraction()
        for n in trail:
            n.visit_count += 1
            n.value_sum += value

    candidates: list[RouteCandidate] = []
    for node in solved.values():
        route = route_from_reactions(target, list(node.path), stock)
        candidates.append(RouteCandidate(
            route=route,
            alignment=alignment_score(route, blueprint),
            attempt_index=attempt_index,
            solved=True,
        ))
    if not candidates:
        route = route_from_reactions(target, list(best_unsolved.path), stock)
        candidates.append(RouteCandidate(
            route=route,
            alignment=alignment_score(route, blueprint),
            attempt_index=attempt_index,
            solved=False,
        ))
    candidates.sort(key=lambda c: (-c.alignment, c.route.length(), c.route.route_hash()))
    return candidates
