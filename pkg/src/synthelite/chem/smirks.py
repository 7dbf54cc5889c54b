"""SMIRKS-style reaction pattern checks for route validators.

Patterns are written in the forward direction (``reactants >> products``) and
evaluated against a RetroReaction read forwards: every reactant-side
component must embed into a distinct reactant molecule and every product-side
component must embed into the product.  Atom maps are ignored; this is a
substructure check on both sides, not an atom-mapping consistency check.
"""

from __future__ import annotations

from .errors import ParseError, PatternError
from .match import has_substructure
from .parser import QueryMol, parse_smarts, parse_smiles
from .template import RetroReaction


def _split_pattern(pattern: str) -> tuple[list[QueryMol], list[QueryMol]]:
    if not isinstance(pattern, str) or not pattern.strip():
        raise PatternError("empty SMIRKS pattern")
    parts = pattern.split(">>")
    if len(parts) != 2:
        raise PatternError("SMIRKS pattern needs exactly one '>>'")

    def side(text: str) -> list[QueryMol]:
        text = text.strip()
        if not text:
            return []
        try:
            q = parse_smarts(text)
        except ParseError as exc:
            raise PatternError(str(exc)) from exc
        return [_component_query(q, comp) for comp in q.components()]

    return side(parts[0]), side(parts[1])


def _component_query(q: QueryMol, comp: list[int]) -> QueryMol:
    remap = {old: new for new, old in enumerate(comp)}
    sub = QueryMol()
    for old in comp:
        sub.add_atom(q.atoms[old])
    for b in q.bonds:
        if b.a1 in remap and b.a2 in remap:
            sub.add_bond(remap[b.a1], remap[b.a2], b.expr)
    return sub


def matches_smirks(rxn: RetroReaction, pattern: str) -> bool:
    """True when the forward reading of the reaction fits the pattern."""
    reactant_queries, product_queries = _split_pattern(pattern)

    product_mol = parse_smiles(rxn.product.smiles)
    for pq in product_queries:
        if not has_substructure(pq, product_mol):
            return False

    reactant_mols = [parse_smiles(m.smiles) for m in rxn.reactants]
    hits = [[i for i, m in enumerate(reactant_mols) if has_substructure(rq, m)]
            for rq in reactant_queries]

    # injective assignment of pattern components to reactant molecules
    def assign(k: int, used: set[int]) -> bool:
        if k == len(hits):
            return True
        for i in hits[k]:
            if i not in used and assign(k + 1, used | {i}):
                return True
        return False

    return assign(0, set())
