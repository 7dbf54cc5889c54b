"""Depth-keyed action enumeration with search-engine caching.

At blueprint depths the engine queries the index once per depth (the query
text is fixed by the blueprint, not by the molecule) and filters applications
to the reference reaction's site when the expanded molecule is literally the
reference product; once the search diverges to other intermediates the site
constraint has no referent and template applicability alone decides.  Past
the blueprint horizon no queries are made at all: the globally most frequent
templates drive expansion, scored by the popularity term alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..chem import Molecule, RetroReaction, apply_template, site_matches
from ..index import TemplateIndex, popularity_prior
from ..phase1 import Blueprint
from .scoring import ScoringParams, action_logit, softmax


@dataclass(frozen=True)
class ScoredAction:
    reaction: RetroReaction
    logit: float
    prior: float = 0.0

    @property
    def key(self) -> tuple:
        return (self.reaction.template_id,
                tuple(sorted(self.reaction.site)),
                tuple(m.smiles for m in self.reaction.reactants))


@dataclass
class ActionCache:
    hits_by_depth: dict[int, list] = field(default_factory=dict)
    actions: dict[tuple[str, int], list[ScoredAction]] = field(default_factory=dict)


def candidate_actions(mol: Molecule, depth: int, blueprint: Blueprint,
                      index: TemplateIndex, cache: ActionCache,
                      params: ScoringParams) -> list[ScoredAction]:
    """Scored actions for expanding ``mol`` at tree depth ``depth`` (1-based)."""
    if depth < 1:
        raise ValueError("depth starts at 1")
    memo_key = (mol.smiles, depth)
    if memo_key in cache.actions:
        return cache.actions[memo_key]

    raw: list[tuple[RetroReaction, float]] = []
    seen: set[tuple] = set()
    if depth <= blueprint.depth:
        step = blueprint.step_at(depth)
        if depth not in cache.hits_by_depth:
            cache.hits_by_depth[depth] = index.search(step.query, params.top_k)
        hits = cache.hits_by_depth[depth]
        on_reference_molecule = mol.smiles == step.ref_reaction.product.smiles
        ref_site = set(step.ref_reaction.site)
        for hit in hits:
            record = index.record(hit.template_id)
            for rxn in apply_template(record.template, mol):
                if on_reference_molecule and not site_matches(rxn, ref_site):
                    continue
                z = action_logit(hit.similarity, record.count, params)
                key = (rxn.template_id, tuple(sorted(rxn.site)),
                       tuple(m.smiles for m in rxn.reactants))
                if key in seen:
                    continue
                seen.add(key)
                raw.append((rxn, z))
    else:
        for record in index.most_frequent(params.top_k):
            for rxn in apply_template(record.template, mol):
                z = popularity_prior(record.count, params.scale_c)
                key = (rxn.template_id, tuple(sorted(rxn.site)),
                       tuple(m.smiles for m in rxn.reactants))
                if key in seen:
                    continue
                seen.add(key)
                raw.append((rxn, z))

    priors = softmax([z for _, z in raw])
    actions = [ScoredAction(reaction=rxn, logit=z, prior=p)
               for (rxn, z), p in zip(raw, priors)]
    cache.actions[memo_key] = actions
    return actions
