"""Canonical atom ranking and SMILES output.

Canonicalization refines Morgan-style invariants to a discrete ordering;
symmetric ties are broken by branching over every member of the first tied
cell and keeping the lexicographically smallest emitted string, which makes
the result independent of input atom order.
"""

from __future__ import annotations

from .errors import ChemError
from .mol import AROMATIC, DOUBLE, ORGANIC_SUBSET, SINGLE, TRIPLE, Mol

_BOND_TOKEN = {SINGLE: "", DOUBLE: "=", TRIPLE: "#", AROMATIC: ""}
_BARE_AROMATIC = {5, 6, 7, 8, 15, 16}

# branch-search safety valve; desk-scale molecules stay far below this
_MAX_TIEBREAK_LEAVES = 20000


def canonical_smiles(mol: Mol) -> str:
    return canonical_form(mol)[0]


def canonical_form(mol: Mol) -> tuple[str, list[int]]:
    """Canonical SMILES plus the original atom ids in written order."""
    pieces: list[tuple[str, list[int]]] = []
    for comp in mol.components():
        sub = mol.subgraph(comp)
        text, local_order = _canon_component(sub)
        pieces.append((text, [comp[i] for i in local_order]))
    pieces.sort(key=lambda p: p[0])
    smiles = ".".join(p[0] for p in pieces)
    order = [i for p in pieces for i in p[1]]
    return smiles, order


def _initial_ranks(mol: Mol) -> list[int]:
    keys = []
    for i, a in enumerate(mol.atoms):
        keys.append((a.atomic_num, int(a.aromatic), a.charge, a.total_h,
                     a.isotope, mol.degree(i)))
    return _dense(keys)


def _dense(keys: list) -> list[int]:
    order = sorted(set(keys))
    lookup = {k: r for r, k in enumerate(order)}
    return [lookup[k] for k in keys]


def _refine(mol: Mol, ranks: list[int]) -> list[int]:
    distinct = len(set(ranks))
    while True:
        keys = []
        for i in range(len(mol.atoms)):
            nbr_key = tuple(sorted(
                (mol.bonds[b].order, ranks[j]) for j, b in mol.neighbors(i)))
            keys.append((ranks[i], nbr_key))
        ranks = _dense(keys)
        n = len(set(ranks))
        if n == distinct:
            return ranks
        distinct = n


def _canon_component(sub: Mol) -> tuple[str, list[int]]:
    counter = [0]

    def rec(ranks: list[int]) -> tuple[str, list[int]]:
        ranks = _refine(sub, ranks)
        cells: dict[int, list[int]] = {}
        for i, r in enumerate(ranks):
            cells.setdefault(r, []).append(i)
        tied = sorted(r for r, members in cells.items() if len(members) > 1)
        if not tied:
            counter[0] += 1
            if counter[0] > _MAX_TIEBREAK_LEAVES:
                raise ChemError("canonicalization tie-break budget exceeded")
            return write_smiles(sub, ranks)
        best: tuple[str, list[int]] | None = None
        for a in cells[tied[0]]:
            bumped = [r * 2 + 1 for r in ranks]
            bumped[a] -= 1
            cand = rec(_dense(bumped))
            if best is None or cand[0] < best[0]:
                best = cand
        assert best is not None
        return best

    return rec(_initial_ranks(sub))


# --------------------------------------------------------------------------
# writer
# --------------------------------------------------------------------------

def write_smiles(mol: Mol, priority: list[int]) -> tuple[str, list[int]]:
    """Emit one connected molecule following the given atom priorities.

    Returns (smiles, atom ids in written order).  The traversal starts at the
    lowest-priority atom and visits neighbours in priority order, so a
    discrete priority vector yields a unique string.
    """
    n = len(mol.atoms)
    if n == 0:
        raise ChemError("empty molecule")
    # rooting at a low-degree atom yields conventional chain-first strings
    root = min(range(n), key=lambda i: (mol.degree(i), priority[i], i))

    parent: dict[int, int | None] = {root: None}
    children: dict[int, list[int]] = {i: [] for i in range(n)}
    back_edges: list[tuple[int, int, int]] = []  # (later, earlier, bond idx)
    seen_bonds: set[int] = set()
    preorder: list[int] = []
    visited = {root}

    import sys
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 6 * n + 200))

    def walk(u: int) -> None:
        preorder.append(u)
        for v, bidx in sorted(mol.neighbors(u), key=lambda t: (priority[t[0]], t[0])):
            if bidx in seen_bonds:
                continue
            seen_bonds.add(bidx)
            if v in visited:
                back_edges.append((u, v, bidx))
            else:
                visited.add(v)
                parent[v] = u
                children[u].append(v)
                walk(v)

    try:
        walk(root)
    finally:
        sys.setrecursionlimit(old_limit)
    pos = {u: i for i, u in enumerate(preorder)}

    # ring-closure digits: open at the earlier atom, close at the later one
    ring_tokens: dict[int, list[tuple[int, int, int]]] = {i: [] for i in range(n)}
    spans = []
    for u, v, bidx in back_edges:
        earlier, later = (u, v) if pos[u] < pos[v] else (v, u)
        spans.append((earlier, later, bidx))
    spans.sort(key=lambda e: (pos[e[0]], pos[e[1]]))
    active: dict[int, int] = {}  # digit -> close position
    assigned: list[tuple[int, int, int, int]] = []
    for earlier, later, bidx in spans:
        for d in sorted(active):
            if active[d] <= pos[earlier]:
                del active[d]
        digit = 1
        while digit in active:
            digit += 1
        active[digit] = pos[later]
        assigned.append((earlier, later, bidx, digit))
    for earlier, later, bidx, digit in assigned:
        ring_tokens[earlier].append((pos[later], digit, bidx))
        ring_tokens[later].append((pos[earlier], digit, bidx))
    for toks in ring_tokens.values():
        toks.sort()

    directions = _assign_directions(mol, pos)

    out: list[str] = []
    order: list[int] = []

    def bond_token(bidx: int, src: int) -> str:
        b = mol.bonds[bidx]
        if b.order == SINGLE and bidx in directions:
            d = directions[bidx]
            return d if src == b.a1 else _flip(d)
        if b.order == SINGLE and mol.atoms[b.a1].aromatic and mol.atoms[b.a2].aromatic:
            return "-"
        if b.order == AROMATIC and not (mol.atoms[b.a1].aromatic and mol.atoms[b.a2].aromatic):
            return ":"
        return _BOND_TOKEN[b.order]

    def emit(u: int) -> None:
        order.append(u)
        ring_partners = [mol.bonds[b].other(u) for _, _, b in ring_tokens[u]]
        out.append(_atom_token(mol, u, parent[u], ring_partners, children[u]))
        for _, digit, bidx in ring_tokens[u]:
            tok = bond_token(bidx, u)
            out.append(tok + (str(digit) if digit < 10 else f"%{digit:02d}"))
        kids = children[u]
        for k, v in enumerate(kids):
            bidx = next(b for w, b in mol.neighbors(u) if w == v)
            if k < len(kids) - 1:
                out.append("(")
                out.append(bond_token(bidx, u))
                emit(v)
                out.append(")")
            else:
                out.append(bond_token(bidx, u))
                emit(v)

    import sys
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * n + 100))
    try:
        emit(root)
    finally:
        sys.setrecursionlimit(old_limit)
    return "".join(out), order


def _flip(d: str) -> str:
    return "\\" if d == "/" else "/"


def _assign_directions(mol: Mol, pos: dict[int, int]) -> dict[int, str]:
    """Pick output '/' and '\\' marks that reproduce stored cis/trans facts.

    All reasoning uses the INTO orientation, dir(neighbour -> bond atom);
    trans means the two INTO directions differ.
    """
    relations = double_bond_relations(mol)
    directions: dict[int, str] = {}  # bond idx -> char as oriented a1 -> a2
    for bidx, n1, n2, trans in sorted(relations, key=lambda r: pos[mol.bonds[r[0]].a1]):
        b = mol.bonds[bidx]
        p, q = b.a1, b.a2
        s1 = mol.bond_between(n1, p)
        s2 = mol.bond_between(n2, q)
        if s1 is None or s2 is None:
            continue
        i1 = mol.bonds.index(s1)
        i2 = mol.bonds.index(s2)
        if i1 in directions:
            d1 = directions[i1] if (s1.a1, s1.a2) == (n1, p) else _flip(directions[i1])
        else:
            d1 = "/"
            directions[i1] = d1 if (s1.a1, s1.a2) == (n1, p) else _flip(d1)
        d2 = _flip(d1) if trans else d1
        stored = d2 if (s2.a1, s2.a2) == (n2, q) else _flip(d2)
        if i2 in directions and directions[i2] != stored:
            continue  # conflicting conjugation; drop this bond's marks
        directions[i2] = stored
    return directions


def double_bond_relations(mol: Mol) -> list[tuple[int, int, int, bool]]:
    """(bond idx, ref neighbour of a1, ref neighbour of a2, is_trans) facts."""
    out = []
    for bidx, b in enumerate(mol.bonds):
        if b.order != DOUBLE:
            continue
        d1 = _directional_neighbor(mol, b.a1, bidx)
        d2 = _directional_neighbor(mol, b.a2, bidx)
        if d1 is None or d2 is None:
            continue
        n1, dir1 = d1
        n2, dir2 = d2
        out.append((bidx, n1, n2, dir1 != dir2))
    return out


def _directional_neighbor(mol: Mol, atom: int, skip_bidx: int) -> tuple[int, str] | None:
    """Reference neighbour and its direction read as neighbour -> atom."""
    for v, bidx in sorted(mol.neighbors(atom)):
        if bidx == skip_bidx:
            continue
        b = mol.bonds[bidx]
        if b.direction is None:
            continue
        if (b.a1, b.a2) == (v, atom):
            return v, b.direction
        return v, _flip(b.direction)
    return None


def _atom_token(mol: Mol, idx: int, parent: int | None,
                ring_partners: list[int], kids: list[int]) -> str:
    a = mol.atoms[idx]
    sym = a.symbol
    if a.aromatic:
        sym = sym.lower()

    chiral = a.chiral
    if chiral:
        ref = list(a.stereo_ref)
        emitted: list = []
        if parent is not None:
            emitted.append(parent)
        if a.total_h == 1:
            emitted.append("H")
        emitted.extend(ring_partners)
        emitted.extend(kids)
        if sorted(map(str, ref)) != sorted(map(str, emitted)) or len(ref) < 3:
            chiral = None  # stereo information no longer complete
        elif _permutation_parity(ref, emitted) == -1:
            chiral = "@@" if chiral == "@" else "@"

    bare_ok = (
        a.charge == 0 and a.isotope == 0 and a.atom_map == 0 and chiral is None
        and ((not a.aromatic and a.symbol in ORGANIC_SUBSET)
             or (a.aromatic and a.atomic_num in _BARE_AROMATIC))
        and a.total_h == mol.implied_h(idx)
    )
    if bare_ok:
        return sym
    parts = ["["]
    if a.isotope:
        parts.append(str(a.isotope))
    parts.append(sym)
    if chiral:
        parts.append(chiral)
    if a.total_h == 1:
        parts.append("H")
    elif a.total_h > 1:
        parts.append(f"H{a.total_h}")
    if a.charge:
        if a.charge == 1:
            parts.append("+")
        elif a.charge == -1:
            parts.append("-")
        else:
            parts.append(f"{a.charge:+d}")
    if a.atom_map:
        parts.append(f":{a.atom_map}")
    parts.append("]")
    return "".join(parts)


def _permutation_parity(ref: list, out: list) -> int:
    """Sign of the permutation taking ref order to out order."""
    src = list(map(str, ref))
    dst = list(map(str, out))
    idx = []
    used = [False] * len(dst)
    for item in src:
        for j, d in enumerate(dst):
            if not used[j] and d == item:
                used[j] = True
                idx.append(j)
                break
    swaps = 0
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                swaps += 1
    return -1 if swaps % 2 else 1
