"""Shared fixtures: toy library, stock, index and the scripted demo backend."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for tests.oracles imports

from synthelite.chem import Molecule, Stock
from synthelite.index import TemplateIndex, load_template_library
from synthelite.llm import ScriptedBackend

ASSETS = Path(__file__).parent.parent / "src" / "synthelite" / "assets"
TOY = ASSETS / "toy"

DEMO_TARGET = "O=C(NCc1ccccc1)c1ccc(OCC)cc1"


@pytest.fixture(scope="session")
def toy_records():
    return load_template_library(TOY / "templates.jsonl")


@pytest.fixture(scope="session")
def toy_index(toy_records):
    return TemplateIndex.build(toy_records)


@pytest.fixture(scope="session")
def toy_stock():
    return Stock.from_file(TOY / "stock.smi")


@pytest.fixture()
def scripted_llm():
    return ScriptedBackend.from_file(TOY / "scripted_llm.jsonl")


@pytest.fixture(scope="session")
def demo_target():
    return Molecule(DEMO_TARGET)


@pytest.fixture(scope="session")
def template_by_id(toy_records):
    return {r.id: r for r in toy_records}
