"""Exception types raised by the chemistry layer."""


class ChemError(ValueError):
    """Base class for chemistry-layer failures."""


class ParseError(ChemError):
    """SMILES or SMARTS text could not be parsed."""


class TemplateError(ChemError):
    """A reaction template is malformed or unsupported."""


class PatternError(ChemError):
    """A SMIRKS/SMARTS matching pattern is malformed."""
