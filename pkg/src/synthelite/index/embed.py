"""Text embedders behind a single callable interface.

The default is a deterministic hashed bag-of-tokens vector so the whole
pipeline runs offline; a sentence-transformers adapter can be swapped in for
real deployments via ``get_embedder("sbert:<model>")``.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

from .errors import EmptyTextError

HASHED_BOW_DIM = 512
_TOKEN_RE = re.compile(r"[a-z0-9]+")


class HashedBowEmbedder:
    """Unit-normalized signed hashed bag-of-tokens; stable across processes."""

    id = f"hashed-bow-{HASHED_BOW_DIM}"
    dim = HASHED_BOW_DIM

    def __call__(self, text: str) -> np.ndarray:
        if not isinstance(text, str) or not text.strip():
            raise EmptyTextError("cannot embed empty text")
        tokens = _TOKEN_RE.findall(text.lower())
        if not tokens:
            raise EmptyTextError("text has no embeddable tokens")
        vec = np.zeros(self.dim, dtype=np.float64)
        for tok in tokens:
            digest = hashlib.sha256(tok.encode("utf-8")).digest()
            idx = int.from_bytes(digest[:4], "little") % self.dim
            sign = 1.0 if digest[4] % 2 == 0 else -1.0
            vec[idx] += sign
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise EmptyTextError("text hashed to a zero vector")
        return (vec / norm).astype(np.float32)


class SbertEmbedder:
    """sentence-transformers adapter; imports lazily, needs model weights."""

    def __init__(self, model_name: str):
        from sentence_transformers import SentenceTransformer

        self.id = f"sbert:{model_name}"
        self._model = SentenceTransformer(model_name)
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def __call__(self, text: str) -> np.ndarray:
        if not isinstance(text, str) or not text.strip():
            raise EmptyTextError("cannot embed empty text")
        vec = self._model.encode([text], normalize_embeddings=True)[0]
        return np.asarray(vec, dtype=np.float32)


def get_embedder(name: str | None = None):
    if name is None or name == HashedBowEmbedder.id or name == "hashed-bow":
        return HashedBowEmbedder()
    if name.startswith("sbert:"):
        return SbertEmbedder(name.split(":", 1)[1])
    raise ValueError(f"unknown embedder {name!r}")


def embed_text(text: str) -> np.ndarray:
    """Embed with the default offline embedder."""
    return HashedBowEmbedder()(text)
