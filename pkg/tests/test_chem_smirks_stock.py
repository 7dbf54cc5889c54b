"""Forward SMIRKS checks and stock membership."""

import pytest

from synthelite.chem import (
    Molecule, PatternError, RetroReaction, RetroTemplate, Stock,
    apply_template, canonicalize, in_stock, matches_smirks, respell,
)

AMIDE_FWD = "C(=O)O.N>>C(=O)N"


@pytest.fixture()
def amide_rxn():
    t = RetroTemplate(smarts="[C:1](=[O:2])[N:3]>>[C:1](=[O:2])[OH].[N:3]", id="amide")
    return apply_template(t, canonicalize("CNC(C)=O"))[0]


@pytest.fixture()
def suzuki_rxn():
    return RetroReaction(
        product=canonicalize("c1ccc(-c2ccccc2)cc1"),
        reactants=(canonicalize("OB(O)c1ccccc1"), canonicalize("Brc1ccccc1")),
        template_id="suzuki_biaryl",
        site=frozenset({1, 2}),
    )


def test_amide_pattern_matches_amide(amide_rxn):
    assert matches_smirks(amide_rxn, AMIDE_FWD)


def test_amide_pattern_rejects_suzuki(suzuki_rxn):
    assert not matches_smirks(suzuki_rxn, AMIDE_FWD)


def test_suzuki_pattern(suzuki_rxn, amide_rxn):
    pattern = "Br-[c].OB(O)-[c]>>[c]-[c]"
    assert matches_smirks(suzuki_rxn, pattern)
    assert not matches_smirks(amide_rxn, pattern)


def test_reactant_components_need_distinct_molecules(amide_rxn):
    # two identical reactant constraints cannot both land on one molecule
    assert not matches_smirks(amide_rxn, "C(=O)O.C(=O)O>>C(=O)N")


def test_pattern_errors(amide_rxn):
    for bad in ["", "   ", "C(=O)O", "A>>B>>C", "[C>>N"]:
        with pytest.raises(PatternError):
            matches_smirks(amide_rxn, bad)


def test_empty_product_side_is_vacuous(amide_rxn):
    assert matches_smirks(amide_rxn, "C(=O)O>>")


def test_stock_membership():
    stock = Stock({"CCO"})
    assert in_stock(stock, "CCO")
    assert in_stock(stock, "OCC")  # spelling-invariant
    assert not in_stock(stock, "c1ccccc1")
    assert in_stock(stock, Molecule("OCC"))


def test_stock_spelling_invariance_randomized(toy_stock):
    members = sorted(toy_stock.members)[:10]
    checked = 0
    for member in members:
        for seed in range(5):
            assert in_stock(toy_stock, respell(member, seed))
            checked += 1
    assert checked == 50


def test_stock_file_comments(tmp_path):
    f = tmp_path / "stock.smi"
    f.write_text("# header\nCCO  # ethanol\n\nOCC\n")
    stock = Stock.from_file(f)
    assert len(stock) == 1
    assert "CCO" in stock
