"""Structure-level chemistry: canonicalization, mapping, templates, stock."""

from .errors import ChemError, ParseError, PatternError, TemplateError
from .molecule import (
    MappedMolecule, Molecule, canonical_map_order, canonicalize,
    canonicalize_str, map_atoms, respell, strip_maps,
)
from .smirks import matches_smirks
from .stock import Stock, in_stock
from .template import (
    MAX_SITES_PER_APPLICATION, RetroReaction, RetroTemplate, apply_template,
    site_matches,
)

__all__ = [
    "ChemError", "ParseError", "PatternError", "TemplateError",
    "Molecule", "MappedMolecule", "canonicalize", "canonicalize_str",
    "canonical_map_order", "map_atoms", "respell", "strip_maps",
    "matches_smirks", "Stock", "in_stock",
    "RetroTemplate", "RetroReaction", "apply_template", "site_matches",
    "MAX_SITES_PER_APPLICATION",
]
