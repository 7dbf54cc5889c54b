"""Retro-template application.

Templates are written in the retro direction, ``product_pattern >>
reactant_patterns``.  Mapped pattern atoms carry molecule atoms across the
transformation (pattern-specified properties override, everything else is
copied); unmapped product-pattern atoms are deleted; unmapped reactant-pattern
atoms are created from their pattern spec.  Unmatched molecule atoms ride
along with whatever fragment their bonds put them in, so intramolecular
disconnections (ring openings) merge naturally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .canon import canonical_form
from .errors import ParseError, TemplateError
from .match import match_query
from .mol import AROMATIC, SINGLE, Atom, Mol
from .molecule import Molecule
from .parser import QueryMol, parse_smarts, parse_smiles

MAX_SITES_PER_APPLICATION = 50
_MATCH_ENUM_LIMIT = 2000


@dataclass(frozen=True)
class RetroTemplate:
    smarts: str
    id: str

    @cached_property
    def _parsed(self) -> tuple[QueryMol, QueryMol]:
        parts = self.smarts.split(">>")
        if len(parts) != 2:
            raise TemplateError(f"template {self.id}: expected exactly one '>>'")
        prod_text, react_text = parts[0].strip(), parts[1].strip()
        if not prod_text or not react_text:
            raise TemplateError(f"template {self.id}: empty side")
        try:
            prod = parse_smarts(prod_text)
            react = parse_smarts(react_text)
        except ParseError as exc:
            raise TemplateError(f"template {self.id}: {exc}") from exc
        if len(prod.components()) != 1:
            raise TemplateError(
                f"template {self.id}: multi-component product patterns are not supported")
        maps = [a.atom_map for a in prod.atoms if a.atom_map]
        if len(maps) != len(set(maps)):
            raise TemplateError(f"template {self.id}: duplicate atom map on product side")
        return prod, react

    @property
    def product_query(self) -> QueryMol:
        return self._parsed[0]

    @property
    def reactant_query(self) -> QueryMol:
        return self._parsed[1]

    def validate(self) -> None:
        self._parsed  # noqa: B018 - forces parse, raising TemplateError if bad


@dataclass(frozen=True)
class RetroReaction:
    """One applied disconnection: product -> reactants at a specific site.

    ``site`` holds atom-map numbers of the product's canonical mapping whose
    bonding the transformation changes.
    """

    product: Molecule
    reactants: tuple[Molecule, ...]
    template_id: str
    site: frozenset[int] = field(default_factory=frozenset)

    @property
    def retro_smiles(self) -> str:
        return f"{self.product.smiles}>>{'.'.join(m.smiles for m in self.reactants)}"

    @property
    def forward_smiles(self) -> str:
        return f"{'.'.join(m.smiles for m in self.reactants)}>>{self.product.smiles}"


def site_matches(reaction: RetroReaction, requested: set[int]) -> bool:
    """Containment either way: the requested atoms may name only part of the
    changed site (single atom of a cleaved bond) or over-specify it."""
    req = frozenset(requested)
    if not req:
        return False
    return req <= reaction.site or reaction.site <= req


def _construction_spec(expr: tuple) -> dict:
    """Properties a pattern atom pins down, read off its top-level conjunction."""
    spec: dict = {}

    def walk(e: tuple) -> None:
        if e[0] == "and":
            for sub in e[1]:
                walk(sub)
            return
        if e[0] != "prim":
            return
        kind, value = e[1], e[2]
        if kind == "elem":
            spec.setdefault("elem", value)
        elif kind == "aliph_elem":
            spec.setdefault("elem", value)
            spec.setdefault("arom", False)
        elif kind == "arom_elem":
            spec.setdefault("elem", value)
            spec.setdefault("arom", True)
        elif kind == "arom":
            spec.setdefault("arom", True)
        elif kind == "aliph":
            spec.setdefault("arom", False)
        elif kind == "charge":
            spec.setdefault("charge", value)
        elif kind == "total_h":
            spec.setdefault("h", value)
        elif kind == "isotope":
            spec.setdefault("iso", value)

    walk(expr)
    return spec


def _bond_order_from_spec(expr: tuple | None, both_aromatic: bool,
                          copied: int | None) -> int:
    if expr is None:
        return AROMATIC if both_aromatic else SINGLE
    prims: list[str] = []

    def walk(e: tuple) -> None:
        if e[0] == "and":
            for sub in e[1]:
                walk(sub)
        elif e[0] == "prim":
            prims.append(e[1])

    walk(expr)
    for p in prims:
        if p == "single" or p == "updown":
            return SINGLE
        if p == "double":
            return 2
        if p == "triple":
            return 3
        if p == "aromatic":
            return AROMATIC
        if p == "any":
            return copied if copied is not None else SINGLE
    return AROMATIC if both_aromatic else SINGLE


def apply_template(template: RetroTemplate, molecule: Molecule,
                   max_sites: int = MAX_SITES_PER_APPLICATION) -> list[RetroReaction]:
    """Every distinct application of the template to the molecule.

    Returns one RetroReaction per distinct (site, reactant set); empty when
    the product pattern does not match.  Deterministically ordered by site
    then reactant SMILES.
    """
    prod_q = template.product_query
    react_q = template.reactant_query

    mol = parse_smiles(molecule.smiles)
    _, canon_order = canonical_form(mol)
    mapnum_of = {atom_id: i + 1 for i, atom_id in enumerate(canon_order)}

    prod_map_to_q = {a.atom_map: qi for qi, a in enumerate(prod_q.atoms) if a.atom_map}
    react_used_maps = {a.atom_map for a in react_q.atoms if a.atom_map}

    outcomes: dict[tuple, RetroReaction] = {}
    for match in match_query(prod_q, mol, limit=_MATCH_ENUM_LIMIT):
        if len(outcomes) >= max_sites:
            break
        result = _apply_one(template, prod_q, react_q, prod_map_to_q,
                            react_used_maps, mol, match, mapnum_of, molecule)
        if result is None:
            continue
        key = (tuple(sorted(result.site)), tuple(m.smiles for m in result.reactants))
        outcomes.setdefault(key, result)

    ordered = sorted(outcomes.items(), key=lambda kv: kv[0])
    return [r for _, r in ordered[:max_sites]]


def _apply_one(template: RetroTemplate, prod_q: QueryMol, react_q: QueryMol,
               prod_map_to_q: dict[int, int], react_used_maps: set[int],
               mol: Mol, match: dict[int, int], mapnum_of: dict[int, int],
               molecule: Molecule) -> RetroReaction | None:
    matched_mol = set(match.values())
    map_to_mol = {m: match[qi] for m, qi in prod_map_to_q.items()}
    kept_maps = {m for m in map_to_mol if m in react_used_maps}
    deleted = {match[qi] for qi, qa in enumerate(prod_q.atoms)
               if not qa.atom_map or qa.atom_map not in kept_maps}

    new = Mol()
    node_of: dict[tuple, int] = {}
    source_of: dict[int, int] = {}  # new atom -> original mol atom (mapped/carryover)

    for ri, qa in enumerate(react_q.atoms):
        spec = _construction_spec(qa.expr)
        if qa.atom_map and qa.atom_map in map_to_mol:
            src_id = map_to_mol[qa.atom_map]
            src = mol.atoms[src_id]
            h = spec.get("h")
            atom = Atom(
                atomic_num=spec.get("elem", src.atomic_num),
                aromatic=spec.get("arom", src.aromatic),
                charge=spec.get("charge", src.charge),
                isotope=spec.get("iso", src.isotope),
                total_h=h if h is not None else src.total_h,
                h_known=h is not None,
                h_explicit=h is not None,
            )
            idx = new.add_atom(atom)
            source_of[idx] = src_id
        else:
            if "elem" not in spec:
                raise TemplateError(
                    f"template {template.id}: added atom needs a definite element")
            h = spec.get("h")
            atom = Atom(
                atomic_num=spec["elem"],
                aromatic=spec.get("arom", False),
                charge=spec.get("charge", 0),
                isotope=spec.get("iso", 0),
                total_h=h if h is not None else 0,
                h_known=h is not None,
                h_explicit=h is not None,
            )
            idx = new.add_atom(atom)
        node_of[("q", ri)] = idx

    for mi in range(len(mol.atoms)):
        if mi in matched_mol:
            continue
        src = mol.atoms[mi]
        idx = new.add_atom(Atom(
            atomic_num=src.atomic_num, aromatic=src.aromatic, charge=src.charge,
            isotope=src.isotope, total_h=src.total_h, h_known=True,
            h_explicit=src.h_explicit, chiral=src.chiral,
            stereo_ref=list(src.stereo_ref),
        ))
        node_of[("m", mi)] = idx
        source_of[idx] = mi

    # bonds dictated by the reactant pattern
    for qb in react_q.bonds:
        n1, n2 = node_of[("q", qb.a1)], node_of[("q", qb.a2)]
        copied = None
        src1 = source_of.get(n1)
        src2 = source_of.get(n2)
        if src1 is not None and src2 is not None:
            existing = mol.bond_between(src1, src2)
            copied = existing.order if existing else None
        both_arom = new.atoms[n1].aromatic and new.atoms[n2].aromatic
        try:
            new.add_bond(n1, n2, _bond_order_from_spec(qb.expr, both_arom, copied))
        except ValueError as exc:
            raise TemplateError(f"template {template.id}: {exc}") from exc

    # molecule bonds that survive
    reactant_node_of_mol = {map_to_mol[m]: node_of[("q", ri)]
                            for m, ri in _react_map_index(react_q).items()
                            if m in map_to_mol}
    for b in mol.bonds:
        in1, in2 = b.a1 in matched_mol, b.a2 in matched_mol
        if in1 and in2:
            continue  # pattern is authoritative among matched atoms
        if b.a1 in deleted or b.a2 in deleted:
            continue
        end1 = reactant_node_of_mol.get(b.a1) if in1 else node_of.get(("m", b.a1))
        end2 = reactant_node_of_mol.get(b.a2) if in2 else node_of.get(("m", b.a2))
        if end1 is None or end2 is None:
            continue  # bond to a matched atom that the template dropped
        new.add_bond(end1, end2, b.order, b.direction if not (in1 or in2) else None)

    _fix_carryover_stereo(new, node_of, mol, reactant_node_of_mol)

    # hydrogen bookkeeping: mapped atoms with untouched bonding keep their
    # hydrogen count, everything else re-derives from valence
    old_env = {mi: _bond_env(mol, mi) for mi in range(len(mol.atoms))}
    for idx, atom in enumerate(new.atoms):
        if atom.h_known:
            continue
        src_id = source_of.get(idx)
        if src_id is not None:
            src = mol.atoms[src_id]
            if (_bond_env_new(new, idx, source_of) == old_env[src_id]
                    and atom.charge == src.charge and atom.atomic_num == src.atomic_num
                    and atom.aromatic == src.aromatic):
                atom.total_h = src.total_h
                atom.h_known = True
                atom.h_explicit = src.h_explicit
                continue
    new.resolve_hydrogens()

    # split, canonicalize and validate the fragments
    reactants: list[Molecule] = []
    for comp in new.components():
        sub = new.subgraph(comp)
        try:
            text = canonical_form(sub)[0]
            reactant = Molecule(text)  # re-parse validates aromaticity/valence
        except ParseError:
            return None
        reactants.append(reactant)
    if not reactants:
        return None
    if any(r.smiles == molecule.smiles for r in reactants):
        return None

    site = set()
    for mi in matched_mol:
        if mi in deleted:
            site.add(mapnum_of[mi])
            continue
        node = reactant_node_of_mol.get(mi)
        if node is None:
            site.add(mapnum_of[mi])
            continue
        if (_bond_env_new(new, node, source_of) != old_env[mi]
                or new.atoms[node].charge != mol.atoms[mi].charge
                or new.atoms[node].total_h != mol.atoms[mi].total_h):
            site.add(mapnum_of[mi])
    if not site:
        # a transformation that changes nothing structural is degenerate
        return None

    return RetroReaction(
        product=molecule,
        reactants=tuple(sorted(reactants, key=lambda m: m.smiles)),
        template_id=template.id,
        site=frozenset(site),
    )


def _react_map_index(react_q: QueryMol) -> dict[int, int]:
    return {a.atom_map: ri for ri, a in enumerate(react_q.atoms) if a.atom_map}


def _bond_env(mol: Mol, idx: int) -> frozenset:
    return frozenset((nbr, mol.bonds[b].order) for nbr, b in mol.neighbors(idx))


def _bond_env_new(new: Mol, idx: int, source_of: dict[int, int]) -> frozenset:
    env = []
    for nbr, b in new.neighbors(idx):
        gid = source_of.get(nbr)
        env.append((gid if gid is not None else ("new", nbr), new.bonds[b].order))
    return frozenset(env)


def _fix_carryover_stereo(new: Mol, node_of: dict[tuple, int], mol: Mol,
                          reactant_node_of_mol: dict[int, int]) -> None:
    translate: dict[int, int] = {}
    for mi, idx in reactant_node_of_mol.items():
        translate[mi] = idx
    for key, idx in node_of.items():
        if key[0] == "m":
            translate[key[1]] = idx
    for key, idx in node_of.items():
        if key[0] != "m":
            continue
        atom = new.atoms[idx]
        if not atom.stereo_ref and atom.chiral is None:
            continue
        remapped = []
        complete = True
        for r in atom.stereo_ref:
            if r == "H":
                remapped.append("H")
            elif isinstance(r, int) and r in translate:
                remapped.append(translate[r])
            else:
                complete = False
        atom.stereo_ref = remapped if complete else []
        if not complete:
            atom.chiral = None
