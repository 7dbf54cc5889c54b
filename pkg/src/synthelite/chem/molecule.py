"""Public molecule types: canonical SMILES fixed points and atom mapping."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .canon import canonical_form, write_smiles
from .errors import ParseError
from .mol import Mol
from .parser import parse_smiles


@dataclass(frozen=True, order=True)
class Molecule:
    """A structure held in canonical SMILES form (construction canonicalizes)."""

    smiles: str

    def __post_init__(self):
        object.__setattr__(self, "smiles", canonicalize_str(self.smiles))

    def __str__(self) -> str:
        return self.smiles


@dataclass(frozen=True)
class MappedMolecule:
    """Canonical SMILES with contiguous atom-map numbers 1..n.

    ``index_of`` stores per-map-number atom facts used by prompt assembly and
    site bookkeeping: element symbol and aromatic flag.
    """

    smiles: str
    parent: Molecule
    index_of: dict[int, tuple[str, bool]]

    def __str__(self) -> str:
        return self.smiles


def canonicalize_str(smiles: str) -> str:
    mol = parse_smiles(smiles)
    return canonical_form(mol)[0]


def canonicalize(smiles: str) -> Molecule:
    """Canonical fixed-point form of the input SMILES.

    Raises ParseError on syntactically or chemically invalid input.
    """
    return Molecule(smiles)


def map_atoms(molecule: Molecule | str) -> MappedMolecule:
    """Number atoms 1..n in canonical written order, deterministically."""
    parent = molecule if isinstance(molecule, Molecule) else Molecule(molecule)
    mol = parse_smiles(parent.smiles)
    _, order = canonical_form(mol)
    for map_num, atom_id in enumerate(order, start=1):
        mol.atoms[atom_id].atom_map = map_num
    mapped = _write_in_order(mol, order)
    index_of = {
        map_num: (mol.atoms[atom_id].symbol, mol.atoms[atom_id].aromatic)
        for map_num, atom_id in enumerate(order, start=1)
    }
    return MappedMolecule(smiles=mapped, parent=parent, index_of=index_of)


def _write_in_order(mol: Mol, order: list[int]) -> str:
    priority = [0] * len(mol.atoms)
    for p, atom_id in enumerate(order):
        priority[atom_id] = p
    pieces = []
    comps = mol.components()
    comps.sort(key=lambda c: min(priority[a] for a in c))
    for comp in comps:
        sub = mol.subgraph(comp)
        local_priority = [priority[a] for a in comp]
        pieces.append(write_smiles(sub, local_priority)[0])
    return ".".join(pieces)


def canonical_map_order(smiles: str) -> dict[int, int]:
    """Atom id -> canonical map number for the molecule's parse graph."""
    mol = parse_smiles(canonicalize_str(smiles))
    _, order = canonical_form(mol)
    return {atom_id: map_num for map_num, atom_id in enumerate(order, start=1)}


def strip_maps(smiles: str) -> str:
    mol = parse_smiles(smiles)
    for atom in mol.atoms:
        atom.atom_map = 0
    return canonical_form(mol)[0]


def respell(smiles: str, seed: int) -> str:
    """A randomized but equivalent spelling of the molecule (for tests)."""
    mol = parse_smiles(smiles)
    rng = random.Random(seed)
    pieces = []
    for comp in mol.components():
        sub = mol.subgraph(comp)
        priority = list(range(len(sub.atoms)))
        rng.shuffle(priority)
        pieces.append(write_smiles(sub, priority)[0])
    rng.shuffle(pieces)
    return ".".join(pieces)
