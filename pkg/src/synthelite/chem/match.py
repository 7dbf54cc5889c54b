"""Substructure matching of SMARTS query graphs onto molecules."""

from __future__ import annotations

from .mol import AROMATIC, DOUBLE, SINGLE, TRIPLE, Mol
from .parser import QueryMol

_DEFAULT_MATCH_LIMIT = 2000


class _AtomProps:
    __slots__ = ("atomic_num", "aromatic", "charge", "isotope", "degree",
                 "total_h", "imp_h", "conn", "ring_count", "ring_sizes",
                 "valence")

    def __init__(self, mol: Mol, idx: int):
        a = mol.atoms[idx]
        self.atomic_num = a.atomic_num
        self.aromatic = a.aromatic
        self.charge = a.charge
        self.isotope = a.isotope
        self.degree = mol.degree(idx)
        self.total_h = a.total_h
        self.imp_h = 0 if a.h_explicit else a.total_h
        self.conn = self.degree + a.total_h
        self.ring_count = mol.ring_memberships(idx)
        self.ring_sizes = mol.ring_sizes(idx)
        order_sum = 0.0
        for _, b in mol.neighbors(idx):
            order_sum += {SINGLE: 1.0, DOUBLE: 2.0, TRIPLE: 3.0, AROMATIC: 1.5}[mol.bonds[b].order]
        self.valence = int(round(order_sum)) + a.total_h


def _atom_props(mol: Mol) -> list[_AtomProps]:
    return [_AtomProps(mol, i) for i in range(len(mol.atoms))]


def _eval_atom(expr: tuple, mol: Mol, idx: int, props: list[_AtomProps]) -> bool:
    tag = expr[0]
    if tag == "and":
        return all(_eval_atom(e, mol, idx, props) for e in expr[1])
    if tag == "or":
        return any(_eval_atom(e, mol, idx, props) for e in expr[1])
    if tag == "not":
        return not _eval_atom(expr[1], mol, idx, props)
    _, kind, value = expr
    p = props[idx]
    if kind == "any":
        return True
    if kind == "elem":
        return p.atomic_num == value
    if kind == "aliph_elem":
        return p.atomic_num == value and not p.aromatic
    if kind == "arom_elem":
        return p.atomic_num == value and p.aromatic
    if kind == "arom":
        return p.aromatic
    if kind == "aliph":
        return not p.aromatic
    if kind == "deg":
        return p.degree == value
    if kind == "total_h":
        return p.total_h == value
    if kind == "imp_h":
        return p.imp_h == value
    if kind == "conn":
        return p.conn == value
    if kind == "charge":
        return p.charge == value
    if kind == "isotope":
        return p.isotope == value
    if kind == "valence":
        return p.valence == value
    if kind == "ring_count":
        return p.ring_count > 0 if value == -1 else p.ring_count == value
    if kind == "ring_size":
        return bool(p.ring_sizes) if value == -1 else value in p.ring_sizes
    if kind == "chiral":
        return True  # matching is achiral
    if kind == "recursive":
        return _recursive_hit(value, mol, idx, props)
    raise AssertionError(f"unknown primitive {kind}")


def _recursive_hit(query: QueryMol, mol: Mol, idx: int, props: list[_AtomProps]) -> bool:
    comps = query.components()
    first = comps[0]
    hits = _match_component(query, first, mol, props, anchor=(first[0], idx),
                            used=set(), limit=1)
    return bool(hits)


def _eval_bond(expr: tuple | None, mol: Mol, bidx: int) -> bool:
    order = mol.bonds[bidx].order
    if expr is None:
        return order in (SINGLE, AROMATIC)
    tag = expr[0]
    if tag == "and":
        return all(_eval_bond(e, mol, bidx) for e in expr[1])
    if tag == "or":
        return any(_eval_bond(e, mol, bidx) for e in expr[1])
    if tag == "not":
        return not _eval_bond(expr[1], mol, bidx)
    kind = expr[1]
    if kind == "single" or kind == "updown":
        return order == SINGLE
    if kind == "double":
        return order == DOUBLE
    if kind == "triple":
        return order == TRIPLE
    if kind == "aromatic":
        return order == AROMATIC
    if kind == "any":
        return True
    if kind == "ring":
        return mol.bond_in_ring(bidx)
    raise AssertionError(f"unknown bond primitive {kind}")


def _component_order(query: QueryMol, comp: list[int], start: int | None = None) -> list[int]:
    """DFS order so every atom after the first has an already-placed neighbour."""
    root = start if start is not None else comp[0]
    order = [root]
    placed = {root}
    frontier = [root]
    while frontier:
        u = frontier.pop()
        for v, _ in sorted(query.neighbors(u)):
            if v not in placed:
                placed.add(v)
                order.append(v)
                frontier.append(v)
    # disconnected pieces inside one dotless component cannot happen
    return order


def _match_component(query: QueryMol, comp: list[int], mol: Mol,
                     props: list[_AtomProps], anchor: tuple[int, int] | None,
                     used: set[int], limit: int) -> list[dict[int, int]]:
    order = _component_order(query, comp, anchor[0] if anchor else None)
    results: list[dict[int, int]] = []

    def extend(k: int, assignment: dict[int, int]) -> None:
        if len(results) >= limit:
            return
        if k == len(order):
            results.append(dict(assignment))
            return
        q = order[k]
        if k == 0:
            candidates = [anchor[1]] if anchor else range(len(mol.atoms))
        else:
            # grow from any already-assigned query neighbour
            base = next(assignment[v] for v, _ in query.neighbors(q) if v in assignment)
            candidates = [w for w, _ in mol.neighbors(base)]
        for m in candidates:
            if m in used or m in assignment.values():
                continue
            if not _eval_atom(query.atoms[q].expr, mol, m, props):
                continue
            ok = True
            for v, qb in query.neighbors(q):
                if v not in assignment:
                    continue
                mb = None
                for w, bidx in mol.neighbors(m):
                    if w == assignment[v]:
                        mb = bidx
                        break
                if mb is None or not _eval_bond(query.bonds[qb].expr, mol, mb):
                    ok = False
                    break
            if ok:
                assignment[q] = m
                extend(k + 1, assignment)
                del assignment[q]

    extend(0, {})
    return results


def match_query(query: QueryMol, mol: Mol,
                limit: int = _DEFAULT_MATCH_LIMIT) -> list[dict[int, int]]:
    """All injective embeddings of the query into the molecule.

    Multi-component queries are matched jointly: components may not share
    molecule atoms.  Returns query-atom -> molecule-atom dicts in a
    deterministic order.
    """
    props = _atom_props(mol)
    comps = query.components()

    results: list[dict[int, int]] = []

    def place(ci: int, assignment: dict[int, int], used: set[int]) -> None:
        if len(results) >= limit:
            return
        if ci == len(comps):
            results.append(dict(assignment))
            return
        for hit in _match_component(query, comps[ci], mol, props, None, used, limit):
            merged = dict(assignment)
            merged.update(hit)
            place(ci + 1, merged, used | set(hit.values()))

    place(0, {}, set())
    return results


def has_substructure(query: QueryMol, mol: Mol) -> bool:
    props = _atom_props(mol)
    comps = query.components()

    def place(ci: int, used: set[int]) -> bool:
        if ci == len(comps):
            return True
        for hit in _match_component(query, comps[ci], mol, props, None, used,
                                    _DEFAULT_MATCH_LIMIT):
            if place(ci + 1, used | set(hit.values())):
                return True
        return False

    return place(0, set())
