"""Semantic template search engine: descriptions, embeddings, retrieval."""

from .embed import HashedBowEmbedder, embed_text, get_embedder
from .errors import DimensionMismatchError, EmptyIndexError, EmptyTextError
from .index import SearchHit, TemplateIndex, popularity_prior
from .library import (
    IMPLAUSIBLE_SENTENCE, TemplateRecord, describe_templates,
    load_template_library,
)

__all__ = [
    "HashedBowEmbedder", "embed_text", "get_embedder",
    "DimensionMismatchError", "EmptyIndexError", "EmptyTextError",
    "SearchHit", "TemplateIndex", "popularity_prior",
    "IMPLAUSIBLE_SENTENCE", "TemplateRecord", "describe_templates",
    "load_template_library",
]
