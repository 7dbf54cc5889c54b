"""Atom mapping: deterministic 1..n numbering in canonical order."""

import re

from synthelite.chem import Molecule, canonicalize_str, map_atoms, strip_maps


def _map_numbers(mapped_smiles: str) -> list[int]:
    return [int(m) for m in re.findall(r":(\d+)\]", mapped_smiles)]


def test_ethanol_maps_follow_canonical_order():
    mapped = map_atoms("CCO")
    assert mapped.smiles == "[CH3:1][CH2:2][OH:3]"
    assert mapped.index_of[1] == ("C", False)
    assert mapped.index_of[2] == ("C", False)
    assert mapped.index_of[3] == ("O", False)


def test_single_atom():
    assert map_atoms("C").smiles == "[CH4:1]"


def test_deterministic():
    a = map_atoms("CC(=O)Nc1ccc(O)cc1").smiles
    b = map_atoms("CC(=O)Nc1ccc(O)cc1").smiles
    c = map_atoms("Oc1ccc(NC(C)=O)cc1").smiles  # alternate spelling
    assert a == b == c


def test_contiguous_from_one():
    for smiles in ["CCO", "c1ccccc1", "CC(=O)NC(C)=O", "O=C(O)c1ccc(O)cc1"]:
        nums = _map_numbers(map_atoms(smiles).smiles)
        assert sorted(nums) == list(range(1, len(nums) + 1))


def test_strip_recovers_parent():
    for smiles in ["CCO", "CC(=O)Nc1ccc(O)cc1", "c1ccc2ccccc2c1"]:
        parent = Molecule(smiles)
        mapped = map_atoms(parent)
        assert strip_maps(mapped.smiles) == parent.smiles
        assert mapped.parent == parent


def test_mapped_form_parses_canonically():
    mapped = map_atoms("CC(=O)O")
    assert canonicalize_str(strip_maps(mapped.smiles)) == canonicalize_str("CC(=O)O")
