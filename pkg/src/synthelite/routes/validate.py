"""Declarative route validators: positioned SMIRKS rules plus plugins.

A checker is data: an ordered list of rules, each a SMIRKS pattern with a
position ("any", "final_step", "first_step", {"within_last_n": n}), an
optional negation, and optional before/after ordering relative to another
rule.  "final step" means the reaction that forms the target (retro depth 1);
"first step" is a reaction with no reactions beneath it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..chem import Molecule, PatternError, RetroReaction, matches_smirks
from .model import Route, RxnNode


@dataclass(frozen=True)
class Rule:
    smirks: str
    position: str = "any"  # any | final_step | first_step | within_last_n
    last_n: int = 0
    negate: bool = False
    rule_id: str = ""
    after: str = ""   # this rule's matches must come forward-after that rule's
    before: str = ""  # ... or forward-before


@dataclass(frozen=True)
class ConstraintChecker:
    id: str
    rules: tuple[Rule, ...] = ()

    @classmethod
    def from_dict(cls, data: dict) -> "ConstraintChecker":
        rules = []
        for rd in data.get("rules", []):
            pos = rd.get("position", "any")
            last_n = 0
            if isinstance(pos, dict):
                last_n = int(pos["within_last_n"])
                pos = "within_last_n"
            if pos not in ("any", "final_step", "first_step", "within_last_n"):
                raise ValueError(f"bad rule position {pos!r}")
            rules.append(Rule(
                smirks=rd["smirks"], position=pos, last_n=last_n,
                negate=bool(rd.get("negate", False)),
                rule_id=str(rd.get("id", "")),
                after=str(rd.get("after", "")),
                before=str(rd.get("before", "")),
            ))
        return cls(id=str(data.get("id", "checker")), rules=tuple(rules))

    @classmethod
    def from_file(cls, path: str | Path) -> "ConstraintChecker":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _as_retro_reaction(rxn: RxnNode) -> RetroReaction:
    product, reactants = rxn.retro_smiles.split(">>", 1)
    return RetroReaction(
        product=Molecule(product),
        reactants=tuple(Molecule(r) for r in reactants.split(".")),
        template_id=rxn.template_id,
        site=frozenset(rxn.site),
    )


def _positions(route: Route, rule: Rule) -> list[tuple[RxnNode, int]]:
    pairs = route.reactions_with_depth()
    if rule.position == "any":
        return pairs
    if rule.position == "final_step":
        return [(r, d) for r, d in pairs if d == 1]
    if rule.position == "within_last_n":
        return [(r, d) for r, d in pairs if d <= rule.last_n]
    if rule.position == "first_step":
        return [(r, d) for r, d in pairs if not _has_descendant_reactions(r)]
    raise AssertionError(rule.position)


def _has_descendant_reactions(rxn: RxnNode) -> bool:
    return any(child.children for child in rxn.children)


def check_constraint(route: Route, checker: ConstraintChecker) -> bool:
    """Every rule satisfied at its position, honoring negation and ordering."""
    match_depths: dict[str, list[int]] = {}
    for i, rule in enumerate(checker.rules):
        depths = [depth for rxn, depth in _positions(route, rule)
                  if matches_smirks(_as_retro_reaction(rxn), rule.smirks)]
        match_depths[rule.rule_id or f"#{i}"] = depths
        if rule.negate:
            if depths:
                return False
        elif not depths:
            return False

    # forward ordering: larger retro depth happens earlier in the synthesis
    for i, rule in enumerate(checker.rules):
        if rule.negate or not (rule.after or rule.before):
            continue
        mine = match_depths[rule.rule_id or f"#{i}"]
        if rule.after:
            other = match_depths.get(rule.after, [])
            if not other or not mine or not any(m < max(other) for m in mine):
                return False
        if rule.before:
            other = match_depths.get(rule.before, [])
            if not other or not mine or not any(m > min(other) for m in mine):
                return False
    return True


def contains_building_block(route: Route, building_block: Molecule | str) -> bool:
    """True when the block appears as any molecule node, leaf or intermediate."""
    bb = building_block if isinstance(building_block, Molecule) else Molecule(building_block)
    return any(node.smiles == bb.smiles for node in route.mol_nodes())


# bespoke predicate escape hatch: name -> fn(route) -> bool
_PLUGINS: dict[str, Callable[[Route], bool]] = {}


def register_plugin(name: str, fn: Callable[[Route], bool]) -> None:
    _PLUGINS[name] = fn


def plugin(name: str) -> Callable[[Route], bool]:
    return _PLUGINS[name]
