"""SMILES and SMARTS parsing.

One tokenizer drives two modes: concrete molecules (SMILES, producing
:class:`~synthelite.chem.mol.Mol`) and query patterns (SMARTS, producing
:class:`QueryMol`).  The SMARTS dialect covers what template libraries in the
RDChiral style actually use: element/aromaticity primitives, ``#n``, ``D`` /
``H`` / ``h`` / ``X`` / ``R`` / ``r`` / ``v``, charges, atom maps, recursive
``$(...)`` atoms and the ``! & , ;`` logic operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError
from .mol import (
    AROMATIC, ATOMIC_NUM, DOUBLE, ORGANIC_SUBSET, SINGLE, TRIPLE, Atom, Bond, Mol,
)

_AROMATIC_SYMBOLS = {"b": 5, "c": 6, "n": 7, "o": 8, "p": 15, "s": 16, "se": 34}
_BOND_CHARS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC}


# --------------------------------------------------------------------------
# query model
# --------------------------------------------------------------------------

# Atom expressions are tagged tuples:
#   ("prim", kind, value) | ("not", e) | ("and", [e..]) | ("or", [e..])
# Primitive kinds: any, elem, arom_elem, aliph_elem, arom, aliph, deg,
# total_h, imp_h, conn, ring_count, ring_size, charge, valence, isotope,
# chiral, recursive.

@dataclass
class QueryAtom:
    expr: tuple
    atom_map: int = 0


@dataclass
class QueryBond:
    a1: int
    a2: int
    expr: tuple | None  # None = unspecified (single-or-aromatic)


class QueryMol:
    def __init__(self) -> None:
        self.atoms: list[QueryAtom] = []
        self.bonds: list[QueryBond] = []
        self._nbrs: list[list[tuple[int, int]]] = []

    def add_atom(self, atom: QueryAtom) -> int:
        self.atoms.append(atom)
        self._nbrs.append([])
        return len(self.atoms) - 1

    def add_bond(self, a1: int, a2: int, expr: tuple | None) -> int:
        self.bonds.append(QueryBond(a1, a2, expr))
        idx = len(self.bonds) - 1
        self._nbrs[a1].append((a2, idx))
        self._nbrs[a2].append((a1, idx))
        return idx

    def neighbors(self, idx: int) -> list[tuple[int, int]]:
        return self._nbrs[idx]

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


# --------------------------------------------------------------------------
# shared scanner
# --------------------------------------------------------------------------

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def expect(self, ch: str) -> None:
        if self.take() != ch:
            raise ParseError(f"expected {ch!r} at position {self.pos - 1} in {self.text!r}")

    def number(self) -> int | None:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == start:
            return None
        return int(self.text[start:self.pos])

    def fail(self, msg: str) -> None:
        raise ParseError(f"{msg} at position {self.pos} in {self.text!r}")


# --------------------------------------------------------------------------
# SMILES
# --------------------------------------------------------------------------

def parse_smiles(text: str) -> Mol:
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty SMILES")
    sc = _Scanner(text.strip())
    mol = Mol()
    # written-aromatic flags (per atom) drive tentative-bond resolution
    written_aromatic: list[bool] = []
    stack: list[int | None] = []
    prev: int | None = None
    pending_bond: int | None = None
    pending_dir: str | None = None
    tentative_bonds: list[int] = []
    rings: dict[int, tuple[int, int | None, str | None]] = {}

    def attach(idx: int) -> None:
        nonlocal prev, pending_bond, pending_dir
        if prev is None and pending_bond is not None:
            sc.fail("bond symbol before any atom")
        if prev is not None:
            order = pending_bond
            tentative = False
            if order is None:
                if written_aromatic[prev] and written_aromatic[idx]:
                    order = AROMATIC
                    tentative = True
                else:
                    order = SINGLE
            bidx = mol.add_bond(prev, idx, order, pending_dir)
            if tentative:
                tentative_bonds.append(bidx)
            mol.atoms[prev].stereo_ref.append(idx)
            mol.atoms[idx].stereo_ref.append(prev)
        pending_bond = None
        pending_dir = None
        prev = idx

    while sc.peek():
        ch = sc.peek()
        if ch == "(":
            sc.take()
            if prev is None:
                sc.fail("branch before any atom")
            stack.append(prev)
        elif ch == ")":
            sc.take()
            if not stack:
                sc.fail("unmatched ')'")
            prev = stack.pop()
        elif ch == ".":
            sc.take()
            prev = None
            pending_bond = None
            pending_dir = None
        elif ch in _BOND_CHARS:
            sc.take()
            if pending_bond is not None:
                sc.fail("double bond symbol")
            pending_bond = _BOND_CHARS[ch]
        elif ch in "/\\":
            sc.take()
            pending_bond = SINGLE
            pending_dir = ch
        elif ch.isdigit() or ch == "%":
            if prev is None:
                sc.fail("ring closure before any atom")
            if ch == "%":
                sc.take()
                num = int(sc.take() + sc.take())
            else:
                num = int(sc.take())
            if num in rings:
                open_atom, open_bond, open_dir = rings.pop(num)
                order = pending_bond if pending_bond is not None else open_bond
                if pending_bond is not None and open_bond is not None and pending_bond != open_bond:
                    sc.fail(f"conflicting ring bond orders for closure {num}")
                tentative = False
                if order is None:
                    if written_aromatic[open_atom] and written_aromatic[prev]:
                        order = AROMATIC
                        tentative = True
                    else:
                        order = SINGLE
                direction = open_dir or pending_dir
                bidx = mol.add_bond(open_atom, prev, order, direction)
                if tentative:
                    tentative_bonds.append(bidx)
                # patch the placeholder slot recorded at ring opening
                ref = mol.atoms[open_atom].stereo_ref
                for i, slot in enumerate(ref):
                    if slot == ("ring", num):
                        ref[i] = prev
                        break
                mol.atoms[prev].stereo_ref.append(open_atom)
                pending_bond = None
                pending_dir = None
            else:
                rings[num] = (prev, pending_bond, pending_dir)
                mol.atoms[prev].stereo_ref.append(("ring", num))
                pending_bond = None
                pending_dir = None
        elif ch == "[":
            idx = _parse_bracket_atom(sc, mol)
            written_aromatic.append(mol.atoms[idx].aromatic)
            was_prev = prev
            attach(idx)
            atom = mol.atoms[idx]
            if atom.chiral and atom.total_h == 1:
                # the bracket hydrogen occupies the slot right after the
                # preceding atom (or first, for a root atom)
                pos = 1 if was_prev is not None else 0
                atom.stereo_ref.insert(pos, "H")
        else:
            idx = _parse_organic_atom(sc, mol)
            written_aromatic.append(mol.atoms[idx].aromatic)
            attach(idx)

    if stack:
        raise ParseError(f"unclosed branch in {text!r}")
    if rings:
        raise ParseError(f"unclosed ring closure in {text!r}")
    if pending_bond is not None:
        raise ParseError(f"dangling bond in {text!r}")
    if not mol.atoms:
        raise ParseError(f"no atoms in {text!r}")

    _finish_molecule(mol, tentative_bonds)
    return mol


def _parse_organic_atom(sc: _Scanner, mol: Mol) -> int:
    two = sc.text[sc.pos:sc.pos + 2]
    if two in ("Cl", "Br"):
        sc.pos += 2
        return mol.add_atom(Atom(atomic_num=ATOMIC_NUM[two]))
    ch = sc.take()
    if ch in ORGANIC_SUBSET:
        return mol.add_atom(Atom(atomic_num=ATOMIC_NUM[ch]))
    if ch in _AROMATIC_SYMBOLS and ch != "se":
        return mol.add_atom(Atom(atomic_num=_AROMATIC_SYMBOLS[ch], aromatic=True))
    sc.fail(f"unexpected character {ch!r}")
    raise AssertionError  # unreachable


def _parse_bracket_atom(sc: _Scanner, mol: Mol) -> int:
    sc.expect("[")
    isotope = sc.number() or 0
    sym = _read_symbol(sc)
    if sym is None:
        sc.fail("expected element symbol")
    symbol, aromatic = sym
    if symbol == "*":
        sc.fail("wildcard atom is not valid in SMILES")
    num = ATOMIC_NUM.get(symbol[0].upper() + symbol[1:])
    if num is None:
        sc.fail(f"unknown element {symbol!r}")
    chiral = None
    if sc.peek() == "@":
        sc.take()
        if sc.peek() == "@":
            sc.take()
            chiral = "@@"
        else:
            chiral = "@"
        if sc.text[sc.pos:sc.pos + 2] in ("TH", "SP", "AL"):
            sc.pos += 2
            sc.number()
    hcount = 0
    if sc.peek() == "H":
        sc.take()
        n = sc.number()
        hcount = 1 if n is None else n
    charge = _read_charge(sc)
    atom_map = 0
    if sc.peek() == ":":
        sc.take()
        m = sc.number()
        if m is None:
            sc.fail("expected atom map number")
        atom_map = m
    sc.expect("]")
    return mol.add_atom(Atom(
        atomic_num=num, aromatic=aromatic, charge=charge, isotope=isotope,
        atom_map=atom_map, total_h=hcount, h_known=True, h_explicit=True,
        chiral=chiral,
    ))


def _read_symbol(sc: _Scanner) -> tuple[str, bool] | None:
    """Element symbol inside a bracket; returns (symbol, aromatic)."""
    ch = sc.peek()
    if ch == "*":
        sc.take()
        return "*", False
    two = sc.text[sc.pos:sc.pos + 2]
    if two == "se":
        sc.pos += 2
        return "Se", True
    if two and two[0].isupper() and two[1:].islower() and two in ATOMIC_NUM:
        sc.pos += 2
        return two, False
    if ch.isupper():
        sc.take()
        return ch, False
    if ch in _AROMATIC_SYMBOLS:
        sc.take()
        return ch.upper(), True
    return None


def _read_charge(sc: _Scanner) -> int:
    charge = 0
    while sc.peek() in "+-":
        sign = 1 if sc.take() == "+" else -1
        n = sc.number()
        if n is not None:
            charge += sign * n
            break
        charge += sign
    return charge


def _finish_molecule(mol: Mol, tentative_bonds: list[int]) -> None:
    # written-aromatic bonds that sit outside any ring are plain singles
    # (e.g. the inter-ring bond of "c1ccccc1c1ccccc1")
    for bidx in tentative_bonds:
        if not mol.bond_in_ring(bidx):
            mol.bonds[bidx].order = SINGLE
    mol.resolve_hydrogens()
    _fold_explicit_hydrogens(mol)
    mol.perceive_aromaticity()
    _validate_aromaticity(mol)


def _fold_explicit_hydrogens(mol: Mol) -> None:
    foldable = []
    for i, atom in enumerate(mol.atoms):
        if (atom.atomic_num == 1 and atom.charge == 0 and atom.isotope == 0
                and atom.atom_map == 0 and mol.degree(i) == 1):
            nbr, bidx = mol.neighbors(i)[0]
            if mol.bonds[bidx].order == SINGLE and mol.atoms[nbr].atomic_num != 1:
                foldable.append((i, nbr))
    if not foldable:
        return
    folded = {i for i, _ in foldable}
    for i, nbr in foldable:
        mol.atoms[nbr].total_h += 1
    keep = [i for i in range(len(mol.atoms)) if i not in folded]
    remap = {old: new for new, old in enumerate(keep)}
    rebuilt = Mol()
    for old in keep:
        a = mol.atoms[old]
        rebuilt.add_atom(Atom(
            atomic_num=a.atomic_num, aromatic=a.aromatic, charge=a.charge,
            isotope=a.isotope, atom_map=a.atom_map, total_h=a.total_h,
            h_known=True, h_explicit=a.h_explicit, chiral=a.chiral,
            stereo_ref=[("H" if (r == "H" or r in folded) else remap[r])
                        for r in a.stereo_ref if not isinstance(r, tuple)],
        ))
    for b in mol.bonds:
        if b.a1 in remap and b.a2 in remap:
            rebuilt.add_bond(remap[b.a1], remap[b.a2], b.order, b.direction)
    mol.atoms = rebuilt.atoms
    mol.bonds = rebuilt.bonds
    mol._nbrs = rebuilt._nbrs
    mol._rings = None


def _validate_aromaticity(mol: Mol) -> None:
    aromatic_rings = [r for r in mol.rings() if all(mol.atoms[a].aromatic for a in r)]
    in_aromatic_ring = {a for r in aromatic_rings for a in r}
    for i, atom in enumerate(mol.atoms):
        if atom.aromatic and i not in in_aromatic_ring:
            raise ParseError(f"aromatic atom outside an aromatic ring (atom {i})")


# --------------------------------------------------------------------------
# SMARTS
# --------------------------------------------------------------------------

def parse_smarts(text: str) -> QueryMol:
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty SMARTS")
    sc = _Scanner(text.strip())
    q = _parse_smarts_chain(sc)
    if sc.peek():
        sc.fail("trailing characters")
    return q


def _parse_smarts_chain(sc: _Scanner, stop_at_paren: bool = False) -> QueryMol:
    q = QueryMol()
    stack: list[int | None] = []
    prev: int | None = None
    pending: tuple | None = None
    pending_set = False
    rings: dict[int, tuple[int, tuple | None, bool]] = {}

    def attach(idx: int) -> None:
        nonlocal prev, pending, pending_set
        if prev is not None:
            q.add_bond(prev, idx, pending if pending_set else None)
        pending = None
        pending_set = False
        prev = idx

    while sc.peek():
        ch = sc.peek()
        if ch == "(":
            sc.take()
            if prev is None:
                sc.fail("branch before any atom")
            stack.append(prev)
        elif ch == ")":
            sc.take()
            if not stack:
                sc.fail("unmatched ')'")
            prev = stack.pop()
        elif ch == ".":
            sc.take()
            prev = None
            pending = None
            pending_set = False
        elif ch.isdigit() or ch == "%":
            if prev is None:
                sc.fail("ring closure before any atom")
            if ch == "%":
                sc.take()
                num = int(sc.take() + sc.take())
            else:
                num = int(sc.take())
            if num in rings:
                open_atom, open_expr, open_set = rings.pop(num)
                expr = pending if pending_set else (open_expr if open_set else None)
                q.add_bond(open_atom, prev, expr)
            else:
                rings[num] = (prev, pending if pending_set else None, pending_set)
            pending = None
            pending_set = False
        elif ch == "[":
            idx = q.add_atom(_parse_smarts_bracket(sc))
            attach(idx)
        elif _looks_like_bond(ch):
            expr = _parse_bond_expr(sc)
            pending = expr
            pending_set = True
        else:
            idx = q.add_atom(_parse_smarts_organic(sc))
            attach(idx)

    if stack:
        raise ParseError(f"unclosed branch in {sc.text!r}")
    if rings:
        raise ParseError(f"unclosed ring closure in {sc.text!r}")
    if pending_set:
        raise ParseError(f"dangling bond in {sc.text!r}")
    if not q.atoms:
        raise ParseError(f"no atoms in {sc.text!r}")
    return q


def _looks_like_bond(ch: str) -> bool:
    return ch in "-=#:~@/\\!" or ch == "&" or ch == "," or ch == ";"


_BOND_PRIMS = {"-": "single", "=": "double", "#": "triple", ":": "aromatic",
               "~": "any", "@": "ring", "/": "updown", "\\": "updown"}


def _parse_bond_expr(sc: _Scanner) -> tuple:
    def prim() -> tuple:
        ch = sc.peek()
        if ch == "!":
            sc.take()
            return ("not", prim())
        if ch in _BOND_PRIMS:
            sc.take()
            return ("prim", _BOND_PRIMS[ch], None)
        sc.fail(f"bad bond primitive {ch!r}")
        raise AssertionError

    def and_chain() -> tuple:
        terms = [prim()]
        while sc.peek() == "&" or (sc.peek() in _BOND_PRIMS or sc.peek() == "!"):
            if sc.peek() == "&":
                sc.take()
            terms.append(prim())
        return terms[0] if len(terms) == 1 else ("and", terms)

    def or_chain() -> tuple:
        terms = [and_chain()]
        while sc.peek() == ",":
            sc.take()
            terms.append(and_chain())
        return terms[0] if len(terms) == 1 else ("or", terms)

    terms = [or_chain()]
    while sc.peek() == ";":
        sc.take()
        terms.append(or_chain())
    return terms[0] if len(terms) == 1 else ("and", terms)


def _parse_smarts_organic(sc: _Scanner) -> QueryAtom:
    two = sc.text[sc.pos:sc.pos + 2]
    if two in ("Cl", "Br"):
        sc.pos += 2
        return QueryAtom(("prim", "aliph_elem", ATOMIC_NUM[two]))
    ch = sc.take()
    if ch == "*":
        return QueryAtom(("prim", "any", None))
    if ch in ORGANIC_SUBSET:
        return QueryAtom(("prim", "aliph_elem", ATOMIC_NUM[ch]))
    if ch in _AROMATIC_SYMBOLS:
        return QueryAtom(("prim", "arom_elem", _AROMATIC_SYMBOLS[ch]))
    if ch == "a":
        return QueryAtom(("prim", "arom", None))
    if ch == "A":
        return QueryAtom(("prim", "aliph", None))
    sc.fail(f"unexpected character {ch!r}")
    raise AssertionError


def _parse_smarts_bracket(sc: _Scanner) -> QueryAtom:
    sc.expect("[")
    atom_map = 0

    def prim() -> tuple:
        nonlocal atom_map
        ch = sc.peek()
        if ch == "!":
            sc.take()
            return ("not", prim())
        if ch == "$":
            sc.take()
            sc.expect("(")
            depth = 1
            start = sc.pos
            while depth:
                c = sc.take()
                if not c:
                    sc.fail("unterminated recursive SMARTS")
                if c == "(":
                    depth += 1
                elif c == ")":
                    depth -= 1
            inner = sc.text[start:sc.pos - 1]
            return ("prim", "recursive", parse_smarts(inner))
        if ch == "#":
            sc.take()
            n = sc.number()
            if n is None:
                sc.fail("expected atomic number after '#'")
            return ("prim", "elem", n)
        if ch == "*":
            sc.take()
            return ("prim", "any", None)
        if ch.isdigit():
            n = sc.number()
            return ("prim", "isotope", n)
        if ch == "+" or ch == "-":
            return ("prim", "charge", _read_charge(sc))
        if ch == "@":
            sc.take()
            if sc.peek() == "@":
                sc.take()
            return ("prim", "chiral", None)
        for code, kind in (("D", "deg"), ("h", "imp_h"), ("X", "conn"),
                           ("v", "valence")):
            if ch == code:
                sc.take()
                n = sc.number()
                return ("prim", kind, 1 if n is None else n)
        if ch == "H":
            # element vs primitive: [H] alone or [2H] style is hydrogen;
            # after other primitives H is the hydrogen-count constraint
            sc.take()
            n = sc.number()
            return ("prim", "total_h", 1 if n is None else n)
        if ch == "R":
            sc.take()
            n = sc.number()
            return ("prim", "ring_count", -1 if n is None else n)
        if ch == "r":
            sc.take()
            n = sc.number()
            return ("prim", "ring_size", -1 if n is None else n)
        if ch == "a":
            sc.take()
            return ("prim", "arom", None)
        if ch == "A":
            sc.take()
            return ("prim", "aliph", None)
        sym = _read_symbol(sc)
        if sym is not None:
            symbol, aromatic = sym
            num = ATOMIC_NUM.get(symbol)
            if num is None:
                sc.fail(f"unknown element {symbol!r}")
            return ("prim", "arom_elem" if aromatic else "aliph_elem", num)
        sc.fail(f"bad atom primitive {sc.peek()!r}")
        raise AssertionError

    def and_chain() -> tuple:
        terms = [prim()]
        while True:
            ch = sc.peek()
            if ch == "&":
                sc.take()
                terms.append(prim())
            elif ch and ch not in ",;]:":
                terms.append(prim())
            else:
                break
        return terms[0] if len(terms) == 1 else ("and", terms)

    def or_chain() -> tuple:
        terms = [and_chain()]
        while sc.peek() == ",":
            sc.take()
            terms.append(and_chain())
        return terms[0] if len(terms) == 1 else ("or", terms)

    terms = [or_chain()]
    while sc.peek() == ";":
        sc.take()
        terms.append(or_chain())
    expr = terms[0] if len(terms) == 1 else ("and", terms)

    if sc.peek() == ":":
        sc.take()
        m = sc.number()
        if m is None:
            sc.fail("expected atom map number")
        atom_map = m
    sc.expect("]")
    return QueryAtom(expr, atom_map)
