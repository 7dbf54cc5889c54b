"""Brute-force graph isomorphism between molecules.

Used as the independent check behind canonicalization tests: two SMILES are
the same constitutional structure iff their graphs are isomorphic under this
exhaustive search.  Deliberately ignores stereo descriptors.
"""

from __future__ import annotations

from synthelite.chem.mol import Mol
from synthelite.chem.parser import parse_smiles


def _invariant(mol: Mol, i: int) -> tuple:
    a = mol.atoms[i]
    return (a.atomic_num, a.charge, a.isotope, a.aromatic, a.total_h, mol.degree(i))


def _component_iso(m1: Mol, c1: list[int], m2: Mol, c2: list[int]) -> bool:
    if len(c1) != len(c2):
        return False
    inv2: dict[tuple, list[int]] = {}
    for j in c2:
        inv2.setdefault(_invariant(m2, j), []).append(j)

    order = sorted(c1, key=lambda i: -m1.degree(i))
    assignment: dict[int, int] = {}

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        i = order[k]
        for j in inv2.get(_invariant(m1, i), []):
            if j in assignment.values():
                continue
            ok = True
            for nbr, bidx in m1.neighbors(i):
                if nbr in assignment:
                    b2 = m2.bond_between(j, assignment[nbr])
                    if b2 is None or b2.order != m1.bonds[bidx].order:
                        ok = False
                        break
            if not ok:
                continue
            # degree equality from the invariant plus edge-consistency both
            # ways gives a genuine isomorphism at full assignment
            assignment[i] = j
            if extend(k + 1):
                return True
            del assignment[i]
        return False

    return extend(0)


def same_structure(smiles1: str, smiles2: str) -> bool:
    m1 = parse_smiles(smiles1)
    m2 = parse_smiles(smiles2)
    comps1 = [c for c in m1.components()]
    comps2 = [c for c in m2.components()]
    if len(comps1) != len(comps2):
        return False

    used: set[int] = set()
    for c1 in comps1:
        hit = None
        for k, c2 in enumerate(comps2):
            if k in used:
                continue
            if _component_iso(m1, c1, m2, c2):
                hit = k
                break
        if hit is None:
            return False
        used.add(hit)
    return True
