"""Exception types for the template search engine."""


class IndexError_(Exception):
    """Base class; trailing underscore avoids clashing with the builtin."""


class EmptyTextError(IndexError_):
    """Text to embed was empty or carried no tokens."""


class EmptyIndexError(IndexError_):
    """Search was attempted against an index with no retrievable records."""


class DimensionMismatchError(IndexError_):
    """Embedder produced vectors of differing dimensions."""
