"""Per-usage contextual vectors, ingested from JSON-lines files.

File layout: a header object declaring the vector dimension, then one
object per occurrence:

    {"dim": 8}
    {"word": "leaf", "embedder": "PREV", "period": "1850-1899",
     "sentence_id": "doc3:12", "vector": [ ... 8 reals ... ]}

Each (word, embedder, period) cell becomes one occurrence set; an
embedder's change score for a word compares its earlier-period cell
against its later-period cell.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import CorruptArtifact, TargetMissing

EMBEDDERS = ("PREV", "POST")


@dataclass(frozen=True)
class OccurrenceSet:
    """All contextual vectors of one word in one (embedder, period) cell."""

    word: str
    embedder: str
    period: str
    sentence_ids: tuple[str, ...]
    vectors: np.ndarray  # (n, dim) float64

    def __len__(self) -> int:
        return len(self.sentence_ids)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


class OccurrenceStore:
    """All occurrence sets from one ingested file, indexed by cell."""

    def __init__(self, dim: int, periods: tuple[str, str], cells: Mapping[tuple[str, str, str], OccurrenceSet]):
        self.dim = dim
        self.periods = periods
        self.cells = dict(cells)

    def words(self) -> list[str]:
        return sorted({w for (w, _, _) in self.cells})

    def get(self, word: str, embedder: str, period: str) -> OccurrenceSet | None:
        return self.cells.get((word, embedder, period))

    def pair(self, word: str, embedder: str) -> tuple[OccurrenceSet, OccurrenceSet]:
        """The (earlier, later) occurrence sets of a word under one embedder."""
        earlier = self.get(word, embedder, self.periods[0])
        later = self.get(word, embedder, self.periods[1])
        if earlier is None or len(earlier) == 0:
            raise TargetMissing(word, f"no {embedder} occurrences in period {self.periods[0]!r}")
        if later is None or len(later) == 0:
            raise TargetMissing(word, f"no {embedder} occurrences in period {self.periods[1]!r}")
        return earlier, later


def load_occurrences(path: str | Path) -> OccurrenceStore:
    """Parse an occurrence JSONL file into a store, validating dimensions."""
    path = Path(path)
    raw: dict[tuple[str, str, str], list[tuple[str, list[float]]]] = {}
    period_order: list[str] = []
    dim = None
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorruptArtifact(path, f"line {lineno}: {exc}") from exc
            if lineno == 1:
                if "dim" not in obj:
                    raise CorruptArtifact(path, "header line must declare 'dim'")
                dim = int(obj["dim"])
                if dim < 1:
                    raise CorruptArtifact(path, f"invalid dimension {dim}")
                declared = obj.get("periods")
                if declared:
                    period_order = [str(p) for p in declared]
                continue
            try:
                word = str(obj["word"])
                embedder = str(obj["embedder"])
                period = str(obj["period"])
                sentence_id = str(obj["sentence_id"])
                vector = obj["vector"]
            except KeyError as exc:
                raise CorruptArtifact(path, f"line {lineno}: missing field {exc}") from exc
            if embedder not in EMBEDDERS:
                raise CorruptArtifact(path, f"line {lineno}: embedder must be one of {EMBEDDERS}")
            if len(vector) != dim:
                raise CorruptArtifact(
                    path, f"line {lineno}: vector has length {len(vector)}, header declares {dim}"
                )
            if period not in period_order:
                period_order.append(period)
            raw.setdefault((word, embedder, period), []).append((sentence_id, vector))
    if dim is None:
        raise CorruptArtifact(path, "empty file; expected a header line")
    if len(period_order) != 2:
        raise CorruptArtifact(path, f"expected exactly 2 periods, found {period_order}")

    cells = {}
    for key, items in raw.items():
        vectors = np.array([v for _, v in items], dtype=np.float64)
        if not np.all(np.isfinite(vectors)):
            raise CorruptArtifact(path, f"non-finite vector in cell {key}")
        cells[key] = OccurrenceSet(
            word=key[0],
            embedder=key[1],
            period=key[2],
            sentence_ids=tuple(s for s, _ in items),
            vectors=vectors,
        )
    return OccurrenceStore(dim=dim, periods=(period_order[0], period_order[1]), cells=cells)


def save_occurrences(store: OccurrenceStore, path: str | Path) -> None:
    """Write a store back to the ingest format (header + one line per occurrence)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"dim": store.dim, "periods": list(store.periods)}) + "\n")
        for key in sorted(store.cells):
            cell = store.cells[key]
            for sid, vec in zip(cell.sentence_ids, cell.vectors):
                fh.write(
                    json.dumps(
                        {
                            "word": cell.word,
                            "embedder": cell.embedder,
                            "period": cell.period,
                            "sentence_id": sid,
                            "vector": [float(x) for x in vec],
                        }
                    )
                    + "\n"
                )


def build_store(
    dim: int,
    periods: tuple[str, str],
    records: Iterable[tuple[str, str, str, str, np.ndarray]],
) -> OccurrenceStore:
    """Assemble a store in memory from (word, embedder, period, sentence_id, vector) rows."""
    raw: dict[tuple[str, str, str], list[tuple[str, np.ndarray]]] = {}
    for word, embedder, period, sid, vec in records:
        raw.setdefault((word, embedder, period), []).append((sid, np.asarray(vec, dtype=np.float64)))
    cells = {
        key: OccurrenceSet(
            word=key[0],
            embedder=key[1],
            period=key[2],
            sentence_ids=tuple(s for s, _ in items),
            vectors=np.array([v for _, v in items], dtype=np.float64),
        )
        for key, items in raw.items()
    }
    return OccurrenceStore(dim=dim, periods=periods, cells=cells)
