"""Independent reference implementation of retro-template application.

Exists solely to cross-check ``synthelite.chem.apply_template``.  It shares
the parsing layer (tokenized SMARTS/SMILES) and the canon), but matching and
molecule construction are written from scratch on a different plan:

* matching enumerates injective assignments from global per-atom candidate
  lists (no neighbour-growing order), with its own predicate evaluator;
* application copies the whole molecule and edits it in place (delete,
  rewire, overlay pattern atoms) instead of building a fresh graph outward
  from the pattern.

Output: multiset of reactant-SMILES tuples, deduplicated by (site,
reactants) exactly like the engine, so the two sides must agree byte for
byte after sorting.
"""

from __future__ import annotations

from synthelite.chem.canon import canonical_form
from synthelite.chem.errors import ParseError
from synthelite.chem.mol import (
    AROMATIC, DEFAULT_VALENCES, DOUBLE, SINGLE, TRIPLE, Atom, Mol,
)
from synthelite.chem.molecule import canonicalize_str
from synthelite.chem.parser import QueryMol, parse_smarts, parse_smiles


# ---------------------------------------------------------------- matching

def _props(mol: Mol, i: int) -> dict:
    a = mol.atoms[i]
    ring_count = mol.ring_memberships(i)
    orders = [mol.bonds[b].order for _, b in mol.neighbors(i)]
    val = sum({SINGLE: 1.0, DOUBLE: 2.0, TRIPLE: 3.0, AROMATIC: 1.5}[o] for o in orders)
    return {
        "num": a.atomic_num, "arom": a.aromatic, "chg": a.charge,
        "iso": a.isotope, "deg": mol.degree(i), "h": a.total_h,
        "imph": 0 if a.h_explicit else a.total_h,
        "conn": mol.degree(i) + a.total_h,
        "rc": ring_count, "rs": mol.ring_sizes(i),
        "val": int(round(val)) + a.total_h,
    }


def _atom_ok(expr: tuple, mol: Mol, i: int) -> bool:
    tag = expr[0]
    if tag == "and":
        for e in expr[1]:
            if not _atom_ok(e, mol, i):
                return False
        return True
    if tag == "or":
        for e in expr[1]:
            if _atom_ok(e, mol, i):
                return True
        return False
    if tag == "not":
        return not _atom_ok(expr[1], mol, i)
    kind, value = expr[1], expr[2]
    p = _props(mol, i)
    if kind == "any":
        return True
    if kind == "elem":
        return p["num"] == value
    if kind == "aliph_elem":
        return p["num"] == value and not p["arom"]
    if kind == "arom_elem":
        return p["num"] == value and p["arom"]
    if kind == "arom":
        return p["arom"]
    if kind == "aliph":
        return not p["arom"]
    if kind == "deg":
        return p["deg"] == value
    if kind == "total_h":
        return p["h"] == value
    if kind == "imp_h":
        return p["imph"] == value
    if kind == "conn":
        return p["conn"] == value
    if kind == "charge":
        return p["chg"] == value
    if kind == "isotope":
        return p["iso"] == value
    if kind == "valence":
        return p["val"] == value
    if kind == "ring_count":
        return p["rc"] > 0 if value == -1 else p["rc"] == value
    if kind == "ring_size":
        return bool(p["rs"]) if value == -1 else value in p["rs"]
    if kind == "chiral":
        return True
    if kind == "recursive":
        return _recursive_ok(value, mol, i)
    raise AssertionError(kind)


def _recursive_ok(sub: QueryMol, mol: Mol, i: int) -> bool:
    comp = sub.components()[0]
    for assignment in _enumerate(sub, comp, mol, anchor=(comp[0], i), stop_first=True):
        return True
    return False


def _bond_ok(expr: tuple | None, mol: Mol, bidx: int) -> bool:
    order = mol.bonds[bidx].order
    if expr is None:
        return order == SINGLE or order == AROMATIC
    tag = expr[0]
    if tag == "and":
        return all(_bond_ok(e, mol, bidx) for e in expr[1])
    if tag == "or":
        return any(_bond_ok(e, mol, bidx) for e in expr[1])
    if tag == "not":
        return not _bond_ok(expr[1], mol, bidx)
    kind = expr[1]
    return {
        "single": order == SINGLE, "updown": order == SINGLE,
        "double": order == DOUBLE, "triple": order == TRIPLE,
        "aromatic": order == AROMATIC, "any": True,
        "ring": mol.bond_in_ring(bidx),
    }[kind]


def _enumerate(query: QueryMol, comp: list[int], mol: Mol,
               anchor: tuple[int, int] | None = None, stop_first: bool = False):
    """Injective assignments for one query component, from global candidate
    lists in query-atom index order (no connectivity-driven ordering)."""
    order = sorted(comp)
    candidates: dict[int, list[int]] = {}
    for q in order:
        if anchor and q == anchor[0]:
            candidates[q] = [anchor[1]] if _atom_ok(query.atoms[q].expr, mol, anchor[1]) else []
        else:
            candidates[q] = [i for i in range(len(mol.atoms))
                             if _atom_ok(query.atoms[q].expr, mol, i)]

    assignment: dict[int, int] = {}

    def rec(k: int):
        if k == len(order):
            yield dict(assignment)
            return
        q = order[k]
        for m in candidates[q]:
            if m in assignment.values():
                continue
            ok = True
            for v, qb in query.neighbors(q):
                if v in assignment:
                    found = None
                    for w, bidx in mol.neighbors(m):
                        if w == assignment[v]:
                            found = bidx
                            break
                    if found is None or not _bond_ok(query.bonds[qb].expr, mol, found):
                        ok = False
                        break
            if ok:
                assignment[q] = m
                yield from rec(k + 1)
                del assignment[q]
                if stop_first:
                    return

    yield from rec(0)


# ------------------------------------------------------------- application

def _spec_of(expr: tuple) -> dict:
    spec: dict = {}

    def walk(e):
        if e[0] == "and":
            for s in e[1]:
                walk(s)
        elif e[0] == "prim":
            kind, v = e[1], e[2]
            if kind == "elem" and "elem" not in spec:
                spec["elem"] = v
            elif kind == "aliph_elem":
                spec.setdefault("elem", v)
                spec.setdefault("arom", False)
            elif kind == "arom_elem":
                spec.setdefault("elem", v)
                spec.setdefault("arom", True)
            elif kind == "arom":
                spec.setdefault("arom", True)
            elif kind == "aliph":
                spec.setdefault("arom", False)
            elif kind == "charge" and "charge" not in spec:
                spec["charge"] = v
            elif kind == "total_h" and "h" not in spec:
                spec["h"] = v
            elif kind == "isotope" and "iso" not in spec:
                spec["iso"] = v

    walk(expr)
    return spec


def _order_of(expr: tuple | None, both_arom: bool, copied: int | None) -> int:
    if expr is None:
        return AROMATIC if both_arom else SINGLE
    flat: list[str] = []

    def walk(e):
        if e[0] == "and":
            for s in e[1]:
                walk(s)
        elif e[0] == "prim":
            flat.append(e[1])

    walk(expr)
    table = {"single": SINGLE, "updown": SINGLE, "double": DOUBLE,
             "triple": TRIPLE, "aromatic": AROMATIC}
    for p in flat:
        if p in table:
            return table[p]
        if p == "any":
            return copied if copied is not None else SINGLE
    return AROMATIC if both_arom else SINGLE


def _implied_h(num: int, charge: int, arom: bool, order_sum: int) -> int:
    if charge != 0:
        return 0
    used = order_sum + (1 if arom and num in (6, 7) else 0)
    for v in DEFAULT_VALENCES.get(num, ()):
        if v >= used:
            return v - used
    return 0


def oracle_apply(smarts: str, smiles: str) -> list[tuple[str, ...]]:
    """Multiset (sorted list) of reactant tuples for the template on the molecule."""
    prod_text, react_text = smarts.split(">>")
    prod_q = parse_smarts(prod_text)
    react_q = parse_smarts(react_text)
    canon = canonicalize_str(smiles)
    mol = parse_smiles(canon)
    _, order = canonical_form(mol)
    mapnum = {aid: i + 1 for i, aid in enumerate(order)}

    prod_maps = {a.atom_map: qi for qi, a in enumerate(prod_q.atoms) if a.atom_map}
    react_maps = {a.atom_map: ri for ri, a in enumerate(react_q.atoms) if a.atom_map}

    seen: set[tuple] = set()
    out: list[tuple[str, ...]] = []
    comp0 = prod_q.components()[0]
    for match in _enumerate(prod_q, comp0, mol):
        res = _edit(mol, match, prod_q, react_q, prod_maps, react_maps, mapnum, canon)
        if res is None:
            continue
        site, reactants = res
        key = (site, reactants)
        if key in seen:
            continue
        seen.add(key)
        out.append(reactants)
        if len(out) >= 50:
            break
    return sorted(out)


def _edit(mol: Mol, match: dict[int, int], prod_q: QueryMol, react_q: QueryMol,
          prod_maps: dict[int, int], react_maps: dict[int, int],
          mapnum: dict[int, int], canon: str):
    matched = set(match.values())
    mol_of_map = {m: match[qi] for m, qi in prod_maps.items()}
    kept = {m: mol_of_map[m] for m in mol_of_map if m in react_maps}
    deleted = matched - set(kept.values())

    # start from a full copy, edit in place
    copy = Mol()
    for a in mol.atoms:
        copy.add_atom(Atom(atomic_num=a.atomic_num, aromatic=a.aromatic,
                           charge=a.charge, isotope=a.isotope, total_h=a.total_h,
                           h_known=True, h_explicit=a.h_explicit))
    keep_bonds = []
    for b in mol.bonds:
        if b.a1 in matched and b.a2 in matched:
            continue
        if b.a1 in deleted or b.a2 in deleted:
            continue
        keep_bonds.append((b.a1, b.a2, b.order))

    # overlay reactant-pattern atoms
    new_ids: dict[int, int] = {}  # react query atom -> copy atom id
    for ri, qa in enumerate(react_q.atoms):
        spec = _spec_of(qa.expr)
        if qa.atom_map and qa.atom_map in kept:
            cid = kept[qa.atom_map]
            src = mol.atoms[cid]
            copy.atoms[cid].atomic_num = spec.get("elem", src.atomic_num)
            copy.atoms[cid].aromatic = spec.get("arom", src.aromatic)
            copy.atoms[cid].charge = spec.get("charge", src.charge)
            copy.atoms[cid].isotope = spec.get("iso", src.isotope)
            if "h" in spec:
                copy.atoms[cid].total_h = spec["h"]
                copy.atoms[cid].h_explicit = True
            else:
                copy.atoms[cid].h_explicit = False
                copy.atoms[cid].total_h = -1  # recompute later if env changed
        else:
            if "elem" not in spec:
                return None
            cid = copy.add_atom(Atom(
                atomic_num=spec["elem"], aromatic=spec.get("arom", False),
                charge=spec.get("charge", 0), isotope=spec.get("iso", 0),
                total_h=spec.get("h", -1), h_known=True,
                h_explicit="h" in spec))
        new_ids[ri] = cid

    for qb in react_q.bonds:
        c1, c2 = new_ids[qb.a1], new_ids[qb.a2]
        copied = None
        if c1 < len(mol.atoms) and c2 < len(mol.atoms):
            old = mol.bond_between(c1, c2)
            copied = old.order if old else None
        both_arom = copy.atoms[c1].aromatic and copy.atoms[c2].aromatic
        keep_bonds.append((c1, c2, _order_of(qb.expr, both_arom, copied)))

    alive = [i for i in range(len(copy.atoms)) if i not in deleted]
    remap = {old: new for new, old in enumerate(alive)}
    final = Mol()
    for old in alive:
        a = copy.atoms[old]
        final.add_atom(Atom(atomic_num=a.atomic_num, aromatic=a.aromatic,
                            charge=a.charge, isotope=a.isotope, total_h=a.total_h,
                            h_known=True, h_explicit=a.h_explicit))
    for a1, a2, o in keep_bonds:
        if a1 in remap and a2 in remap:
            final.add_bond(remap[a1], remap[a2], o)

    # hydrogen fixup: untouched envs keep counts, changed ones re-derive
    old_env = {i: frozenset((n, mol.bonds[b].order) for n, b in mol.neighbors(i))
               for i in range(len(mol.atoms))}
    for old in alive:
        fid = remap[old]
        atom = final.atoms[fid]
        env = frozenset(
            (alive[n] if alive[n] < len(mol.atoms) else ("new", alive[n]),
             final.bonds[b].order)
            for n, b in final.neighbors(fid))
        if old < len(mol.atoms):
            src = mol.atoms[old]
            if atom.total_h == -1:
                if (env == old_env[old] and atom.charge == src.charge
                        and atom.atomic_num == src.atomic_num
                        and atom.aromatic == src.aromatic):
                    atom.total_h = src.total_h
                    atom.h_explicit = src.h_explicit
                else:
                    atom.total_h = _implied_h(atom.atomic_num, atom.charge,
                                              atom.aromatic, _order_sum(final, fid))
        elif atom.total_h == -1:
            atom.total_h = _implied_h(atom.atomic_num, atom.charge,
                                      atom.aromatic, _order_sum(final, fid))

    reactants = []
    for comp in final.components():
        sub = final.subgraph(comp)
        try:
            text = canonical_form(sub)[0]
            text = canonicalize_str(text)
        except ParseError:
            return None
        reactants.append(text)
    if not reactants or any(r == canon for r in reactants):
        return None

    site = []
    for mi in matched:
        if mi in deleted:
            site.append(mapnum[mi])
            continue
        fid = remap[mi]
        env = frozenset(
            (alive[n] if alive[n] < len(mol.atoms) else ("new", alive[n]),
             final.bonds[b].order)
            for n, b in final.neighbors(fid))
        if (env != old_env[mi]
                or final.atoms[fid].charge != mol.atoms[mi].charge
                or final.atoms[fid].total_h != mol.atoms[mi].total_h):
            site.append(mapnum[mi])
    if not site:
        return None
    return tuple(sorted(site)), tuple(sorted(reactants))


def _order_sum(m: Mol, i: int) -> int:
    return sum({SINGLE: 1, DOUBLE: 2, TRIPLE: 3, AROMATIC: 1}[m.bonds[b].order]
               for _, b in m.neighbors(i))
