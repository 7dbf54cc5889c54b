"""Stock of purchasable starting materials, keyed by canonical SMILES."""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .molecule import Molecule, canonicalize_str


class Stock:
    """Immutable after load; membership is canonical-form membership."""

    def __init__(self, members: set[str] | None = None):
        self.members: frozenset[str] = frozenset(
            canonicalize_str(m) for m in (members or set()))

    def __contains__(self, molecule: Molecule | str) -> bool:
        smi = molecule.smiles if isinstance(molecule, Molecule) else canonicalize_str(molecule)
        return smi in self.members

    def __len__(self) -> int:
        return len(self.members)

    @classmethod
    def from_file(cls, path: str | Path) -> "Stock":
        """One SMILES per line, UTF-8; '#' starts a comment."""
        members: set[str] = set()
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                members.add(canonicalize_str(line))
            except ParseError as exc:
                raise ParseError(f"{path}: bad stock entry {line!r}: {exc}") from exc
        return cls(members)


def in_stock(stock: Stock, molecule: Molecule | str) -> bool:
    return molecule in stock
