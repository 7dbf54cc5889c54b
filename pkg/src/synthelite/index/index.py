"""The semantic template index: build, persist, reload and query.

Retrieval is a brute-force cosine scan over unit vectors, which is exact and
fast enough for libraries up to ~50k templates.  Every query is appended to
``query_log`` so callers can assert search-engine economy.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embed import get_embedder
from .errors import DimensionMismatchError, EmptyIndexError, EmptyTextError
from .library import TemplateRecord, load_template_library


@dataclass(frozen=True)
class SearchHit:
    template_id: str
    similarity: float


def popularity_prior(count: int, scale: float) -> float:
    """Saturating occurrence prior count/(count + scale), in [0, 1)."""
    if scale <= 0:
        raise ValueError("scale constant must be positive")
    if count < 0:
        raise ValueError("count must be non-negative")
    return count / (count + scale)


class TemplateIndex:
    def __init__(self, records: list[TemplateRecord], vectors: np.ndarray,
                 retrievable: list[int], embedder_id: str):
        self.records = records
        self.vectors = vectors  # float32, unit rows, aligned with retrievable
        self.retrievable = retrievable  # record positions, same order as rows
        self.embedder_id = embedder_id
        self._embedder = get_embedder(embedder_id)
        self._by_id = {r.id: r for r in records}
        # cosine in float64 against true norms, so identical query and stored
        # text score 1.0 to machine precision despite float32 storage
        self._rows64 = vectors.astype(np.float64)
        norms = np.linalg.norm(self._rows64, axis=1)
        norms[norms == 0.0] = 1.0
        self._norms64 = norms
        self.query_log: list[str] = []

    # -- construction --------------------------------------------------------

    @classmethod
    def build(cls, records: list[TemplateRecord], embedder=None) -> "TemplateIndex":
        embedder = embedder or get_embedder(None)
        rows: list[np.ndarray] = []
        retrievable: list[int] = []
        dim: int | None = None
        for pos, rec in enumerate(records):
            if rec.implausible:
                continue
            if not rec.description:
                raise ValueError(f"record {rec.id} has no description; describe first")
            vec = np.asarray(embedder(rec.description), dtype=np.float32)
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise DimensionMismatchError(
                    f"embedder produced dim {vec.shape[0]} != {dim}")
            rows.append(vec)
            retrievable.append(pos)
        vectors = (np.vstack(rows) if rows
                   else np.zeros((0, dim or embedder.dim), dtype=np.float32))
        return cls(records, vectors, retrievable, embedder.id)

    # -- persistence ---------------------------------------------------------

    def save(self, directory: str | Path) -> None:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        with (out / "records.jsonl").open("w", encoding="utf-8") as f:
            for rec in self.records:
                f.write(json.dumps({
                    "id": rec.id, "smarts": rec.template.smarts,
                    "count": rec.count, "description": rec.description,
                    "implausible": rec.implausible,
                }, sort_keys=True) + "\n")
        n, dim = self.vectors.shape
        with (out / "vectors.bin").open("wb") as f:
            f.write(struct.pack("<II", dim, n))
            f.write(self.vectors.astype("<f4").tobytes(order="C"))
        (out / "meta.json").write_text(json.dumps(
            {"embedder_id": self.embedder_id, "retrievable": self.retrievable},
            sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, directory: str | Path) -> "TemplateIndex":
        root = Path(directory)
        records = load_template_library(root / "records.jsonl")
        raw = (root / "vectors.bin").read_bytes()
        dim, n = struct.unpack_from("<II", raw, 0)
        vectors = np.frombuffer(raw, dtype="<f4", offset=8).reshape(n, dim).copy()
        meta = json.loads((root / "meta.json").read_text(encoding="utf-8"))
        return cls(records, vectors, list(meta["retrievable"]), meta["embedder_id"])

    # -- queries --------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.retrievable)

    def record(self, template_id: str) -> TemplateRecord:
        return self._by_id[template_id]

    def search(self, query: str, k: int) -> list[SearchHit]:
        """Top-k by cosine similarity; ties break on higher count then id."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if not self.retrievable:
            raise EmptyIndexError("index has no retrievable records")
        if not query or not query.strip():
            raise EmptyTextError("empty query")
        self.query_log.append(query)
        qvec = np.asarray(self._embedder(query), dtype=np.float32).astype(np.float64)
        if qvec.shape[0] != self.vectors.shape[1]:
            raise DimensionMismatchError(
                f"query dim {qvec.shape[0]} != index dim {self.vectors.shape[1]}")
        qnorm = float(np.linalg.norm(qvec)) or 1.0
        sims = (self._rows64 @ qvec) / (self._norms64 * qnorm)
        scored = []
        for row, pos in enumerate(self.retrievable):
            rec = self.records[pos]
            scored.append((-float(sims[row]), -rec.count, rec.id))
        scored.sort()
        return [SearchHit(template_id=tid, similarity=-neg_sim)
                for neg_sim, _, tid in scored[:k]]

    def most_frequent(self, k: int) -> list[TemplateRecord]:
        """Top-k retrievable records by library occurrence (no query issued)."""
        recs = [self.records[pos] for pos in self.retrievable]
        recs.sort(key=lambda r: (-r.count, r.id))
        return recs[:k]
