"""Molecular graph model: atoms, bonds, rings, aromaticity and hydrogen counts.

The model is deliberately small: enough of the SMILES valence rules to
round-trip the structures that appear in retro-template libraries.  Hydrogens
are never graph nodes; explicit ``[H]`` atoms are folded into their heavy
neighbour at parse time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Bond orders. AROMATIC is its own order, not a resonance annotation.
SINGLE, DOUBLE, TRIPLE, AROMATIC = 1, 2, 3, 4

_BOND_VALENCE = {SINGLE: 1, DOUBLE: 2, TRIPLE: 3, AROMATIC: 1}

ATOMIC_NUM = {
    "H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8,
    "F": 9, "Ne": 10, "Na": 11, "Mg": 12, "Al": 13, "Si": 14, "P": 15,
    "S": 16, "Cl": 17, "Ar": 18, "K": 19, "Ca": 20, "Zn": 30, "Se": 34,
    "Br": 35, "Sn": 50, "I": 53,
}
SYMBOL = {v: k for k, v in ATOMIC_NUM.items()}

# Default valence lists for implicit-hydrogen inference (lowest fit wins).
DEFAULT_VALENCES = {
    5: (3,), 6: (4,), 7: (3,), 8: (2,), 15: (3, 5), 16: (2, 4, 6),
    9: (1,), 17: (1,), 35: (1,), 53: (1,),
}

ORGANIC_SUBSET = {"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"}
AROMATIC_CAPABLE = {5, 6, 7, 8, 15, 16, 34}


@dataclass
class Atom:
    atomic_num: int
    aromatic: bool = False
    charge: int = 0
    isotope: int = 0
    atom_map: int = 0
    total_h: int = 0
    h_known: bool = False      # True once total_h is resolved
    h_explicit: bool = False   # H count came from a bracket spec
    chiral: str | None = None  # "@" or "@@"
    # neighbour ids in reference order for tetrahedral parity; "H" marks the
    # implicit hydrogen slot of a bracket atom such as [C@H]
    stereo_ref: list = field(default_factory=list)

    @property
    def symbol(self) -> str:
        return SYMBOL.get(self.atomic_num, "*")


@dataclass
class Bond:
    a1: int
    a2: int
    order: int
    # direction of the written bond a1->a2 for double-bond stereo: "/" or "\\"
    direction: str | None = None

    def other(self, idx: int) -> int:
        return self.a2 if idx == self.a1 else self.a1


class Mol:
    """A small mutable molecular graph."""

    def __init__(self) -> None:
        self.atoms: list[Atom] = []
        self.bonds: list[Bond] = []
        self._nbrs: list[list[tuple[int, int]]] = []  # atom -> [(nbr, bond_idx)]
        self._rings: list[list[int]] | None = None

    # -- construction ------------------------------------------------------

    def add_atom(self, atom: Atom) -> int:
        self.atoms.append(atom)
        self._nbrs.append([])
        self._rings = None
        return len(self.atoms) - 1

    def add_bond(self, a1: int, a2: int, order: int, direction: str | None = None) -> int:
        if a1 == a2:
            raise ValueError("self bond")
        if self.bond_between(a1, a2) is not None:
            raise ValueError("duplicate bond")
        self.bonds.append(Bond(a1, a2, order, direction))
        idx = len(self.bonds) - 1
        self._nbrs[a1].append((a2, idx))
        self._nbrs[a2].append((a1, idx))
        self._rings = None
        return idx

    # -- queries -----------------------------------------------------------

    def neighbors(self, idx: int) -> list[tuple[int, int]]:
        return self._nbrs[idx]

    def degree(self, idx: int) -> int:
        return len(self._nbrs[idx])

    def bond_between(self, a1: int, a2: int) -> Bond | None:
        for nbr, bidx in self._nbrs[a1]:
            if nbr == a2:
                return self.bonds[bidx]
        return None

    def bond_order_sum(self, idx: int) -> int:
        total = sum(_BOND_VALENCE[self.bonds[b].order] for _, b in self._nbrs[idx])
        atom = self.atoms[idx]
        # Aromatic C/N carry one pi bond beyond their sigma framework; aromatic
        # O/S contribute a lone pair instead and get no correction.
        if atom.aromatic and atom.atomic_num in (6, 7):
            total += 1
        return total

    def implied_h(self, idx: int) -> int:
        """Hydrogen count inferred from the lowest default valence that fits."""
        atom = self.atoms[idx]
        if atom.charge != 0:
            return 0
        valences = DEFAULT_VALENCES.get(atom.atomic_num)
        if not valences:
            return 0
        used = self.bond_order_sum(idx)
        for v in valences:
            if v >= used:
                return v - used
        return 0

    def resolve_hydrogens(self) -> None:
        for i, atom in enumerate(self.atoms):
            if not atom.h_known:
                atom.total_h = self.implied_h(i)
                atom.h_known = True

    # -- rings -------------------------------------------------------------

    def rings(self) -> list[list[int]]:
        """Smallest ring through each ring bond (unique, unordered membership)."""
        if self._rings is None:
            self._rings = self._perceive_rings()
        return self._rings

    def _perceive_rings(self) -> list[list[int]]:
        seen: set[frozenset[int]] = set()
        out: list[list[int]] = []
        for bond in self.bonds:
            ring = self._shortest_cycle(bond)
            if ring is None:
                continue
            key = frozenset(ring)
            if key not in seen:
                seen.add(key)
                out.append(ring)
        return out

    def _shortest_cycle(self, bond: Bond) -> list[int] | None:
        # BFS from a1 to a2 avoiding the bond itself.
        start, goal = bond.a1, bond.a2
        prev: dict[int, int] = {start: -1}
        queue = [start]
        while queue:
            nxt: list[int] = []
            for u in queue:
                for v, bidx in self._nbrs[u]:
                    if self.bonds[bidx] is bond or v in prev:
                        continue
                    prev[v] = u
                    if v == goal:
                        path = [v]
                        while path[-1] != start:
                            path.append(prev[path[-1]])
                        return path
                    nxt.append(v)
            queue = nxt
        return None

    def ring_memberships(self, idx: int) -> int:
        return sum(1 for r in self.rings() if idx in r)

    def ring_sizes(self, idx: int) -> set[int]:
        return {len(r) for r in self.rings() if idx in r}

    def bond_in_ring(self, bidx: int) -> bool:
        b = self.bonds[bidx]
        for r in self.rings():
            rs = set(r)
            if b.a1 in rs and b.a2 in rs:
                # both atoms in the ring and consecutive along it
                n = len(r)
                for i in range(n):
                    p, q = r[i], r[(i + 1) % n]
                    if {p, q} == {b.a1, b.a2}:
                        return True
        return False

    # -- aromaticity ---------------------------------------------------------

    def perceive_aromaticity(self) -> None:
        """Flag Hueckel-aromatic rings written in Kekule form.

        Never removes aromaticity that the input declared.  Works on fused
        systems first (naphthalene-style perimeters), then settles leftover
        rings iteratively so benzo-fused aliphatics still aromatize their
        benzo ring.
        """
        rings = self.rings()
        if not rings:
            return
        systems = self._ring_systems(rings)
        for system in systems:
            ring_ids = [rings[i] for i in system]
            atoms = sorted({a for r in ring_ids for a in r})
            if all(self._sp2_capable(a) for a in atoms):
                pi = self._pi_total(atoms)
                if pi is not None and pi % 4 == 2:
                    self._aromatize(ring_ids)
                    continue
            # per-ring fallback, iterated to fixpoint
            changed = True
            while changed:
                changed = False
                for ri in system:
                    ring = rings[ri]
                    if all(self.atoms[a].aromatic for a in ring):
                        continue
                    if not all(self._sp2_capable(a) for a in ring):
                        continue
                    pi = self._pi_total(ring)
                    if pi is not None and pi % 4 == 2:
                        self._aromatize([ring])
                        changed = True

    def _ring_systems(self, rings: list[list[int]]) -> list[list[int]]:
        n = len(rings)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(n):
            for j in range(i + 1, n):
                if set(rings[i]) & set(rings[j]):
                    parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return list(groups.values())

    def _sp2_capable(self, idx: int) -> bool:
        atom = self.atoms[idx]
        if atom.atomic_num not in AROMATIC_CAPABLE:
            return False
        if self.degree(idx) > 3 or abs(atom.charge) > 1:
            return False
        orders = [self.bonds[b].order for _, b in self._nbrs[idx]]
        if TRIPLE in orders or orders.count(DOUBLE) > 1:
            return False
        return True

    def _pi_total(self, member_ids: list[int]) -> int | None:
        within = set(member_ids)
        total = 0
        for a in member_ids:
            e = self._pi_electrons(a, within)
            if e is None:
                return None
            total += e
        return total

    def _pi_electrons(self, idx: int, within: set[int]) -> int | None:
        """Electrons atom contributes to the ring pi system; None disqualifies."""
        atom = self.atoms[idx]
        if atom.aromatic:
            # already-aromatic atom inside a candidate system: count like a
            # double-bond participant unless it is a lone-pair donor
            if atom.atomic_num in (8, 16):
                return 2
            if atom.atomic_num == 7 and atom.total_h > 0 and self.degree(idx) == 2:
                return 2
            return 1
        for nbr, bidx in self._nbrs[idx]:
            if self.bonds[bidx].order == DOUBLE:
                if nbr in within:
                    return 1
                return 0 if not self.atoms[nbr].aromatic else 1
        if atom.atomic_num in (7, 15):
            return 2
        if atom.atomic_num in (8, 16, 34):
            return 2
        if atom.atomic_num == 6:
            if atom.charge == -1:
                return 2
            if atom.charge == 1:
                return 0
            return None
        if atom.atomic_num == 5:
            return 0
        return None

    def _aromatize(self, ring_ids: list[list[int]]) -> None:
        for ring in ring_ids:
            rs = set(ring)
            for a in ring:
                self.atoms[a].aromatic = True
            n = len(ring)
            for i in range(n):
                bond = self.bond_between(ring[i], ring[(i + 1) % n])
                if bond is not None and {bond.a1, bond.a2} <= rs:
                    bond.order = AROMATIC

    # -- components ----------------------------------------------------------

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps: list[list[int]] = []
        for start in range(len(self.atoms)):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                u = stack.pop()
                comp.append(u)
                for v, _ in self._nbrs[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            comps.append(sorted(comp))
        return comps

    def subgraph(self, atom_ids: list[int]) -> "Mol":
        """Copy of the induced subgraph; atom order follows atom_ids."""
        remap = {old: new for new, old in enumerate(atom_ids)}
        sub = Mol()
        for old in atom_ids:
            a = self.atoms[old]
            sub.add_atom(Atom(
                atomic_num=a.atomic_num, aromatic=a.aromatic, charge=a.charge,
                isotope=a.isotope, atom_map=a.atom_map, total_h=a.total_h,
                h_known=a.h_known, h_explicit=a.h_explicit, chiral=a.chiral,
                stereo_ref=[("H" if r == "H" else remap.get(r)) for r in a.stereo_ref
                            if r == "H" or r in remap],
            ))
        for b in self.bonds:
            if b.a1 in remap and b.a2 in remap:
                sub.add_bond(remap[b.a1], remap[b.a2], b.order, b.direction)
        return sub
