"""Dense-feature baseline arm: precomputed embeddings, same scoring path.

Feature vectors arrive from an external extractor (one row per item) and
are L2-normalized on load, so cosine similarity reduces to a dot product.
The resulting matrix is a drop-in for the topic-based one: `recommend`
and `score` run unchanged, only the similarity values differ.  Feature
cosines may be negative, so the entry bounds relax to [-1, 1].
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .recommend import SimilarityMatrix, _mirrored_cosine


@dataclass
class FeatureTable:
    """Per-item embedding rows, unit-norm, aligned with `item_ids`."""

    item_ids: tuple[str, ...]
    vectors: np.ndarray  # float64, M x F

    @property
    def M(self) -> int:
        return len(self.item_ids)

    @property
    def F(self) -> int:
        return self.vectors.shape[1]


def _finish_table(
    ids: list[str],
    rows: np.ndarray,
    item_ids,
) -> FeatureTable:
    """Validate, align to the requested id order, and L2-normalize."""
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ValidationError(f"duplicate item ids in feature file: {dupes}")

    bad = [ids[i] for i in range(len(ids)) if not np.all(np.isfinite(rows[i]))]
    if bad:
        raise ValidationError(f"non-finite feature values for items: {bad}")

    by_id = {item_id: i for i, item_id in enumerate(ids)}
    if item_ids is not None:
        missing = [item_id for item_id in item_ids if item_id not in by_id]
        if missing:
            raise ValidationError(f"feature file missing items: {missing}")
        order = list(item_ids)
    else:
        order = sorted(ids)
    rows = rows[[by_id[item_id] for item_id in order]]

    norms = np.linalg.norm(rows, axis=1)
    zero = [order[i] for i in np.nonzero(norms == 0.0)[0]]
    if zero:
        raise ValidationError(f"zero feature vectors cannot be normalized: {zero}")
    return FeatureTable(item_ids=tuple(order), vectors=rows / norms[:, None])


def load_features(
    path: str | Path,
    format: str = "csv",
    item_ids=None,
) -> FeatureTable:
    """Load an embedding table from CSV or raw little-endian float32.

    CSV: header `item_id,f0,...,f{F-1}`.  Raw: packed float32 values with
    a JSON sidecar at `<path>.json` holding {"item_ids": [...], "F": n}.
    When `item_ids` is given the rows are aligned to that order (a subset
    of the file is fine); otherwise rows are sorted by item id.
    """
    path = Path(path)
    if format == "csv":
        ids, rows = _read_csv(path)
    elif format == "raw":
        ids, rows = _read_raw(path)
    else:
        raise ValueError(f"unknown format {format!r}, expected 'csv' or 'raw'")
    return _finish_table(ids, rows, item_ids)


def _read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    ids: list[str] = []
    data: list[list[float]] = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or header[0] != "item_id":
            raise ParseError(f"{path}: expected header starting with 'item_id'")
        width = len(header) - 1
        if width < 1:
            raise ParseError(f"{path}: no feature columns")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width + 1:
                raise ParseError(
                    f"{path}:{lineno}: expected {width + 1} columns, got {len(row)}"
                )
            try:
                values = [float(v) for v in row[1:]]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad float: {exc}") from exc
            nonfinite = [v for v in values if not math.isfinite(v)]
            if nonfinite:
                raise ValidationError(
                    f"{path}:{lineno}: non-finite feature value for {row[0]!r}"
                )
            ids.append(row[0])
            data.append(values)
    if not ids:
        raise ParseError(f"{path}: no feature rows")
    return ids, np.array(data, dtype=np.float64)


def _read_raw(path: Path) -> tuple[list[str], np.ndarray]:
    sidecar = path.with_name(path.name + ".json")
    if not sidecar.exists():
        raise ParseError(f"{path}: missing sidecar {sidecar.name}")
    with open(sidecar, encoding="utf-8") as f:
        meta = json.load(f)
    try:
        ids = [str(i) for i in meta["item_ids"]]
        width = int(meta["F"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{sidecar}: expected keys 'item_ids' and 'F'") from exc

    raw = np.fromfile(path, dtype="<f4")
    if raw.size != len(ids) * width:
        raise ParseError(
            f"{path}: expected {len(ids) * width} float32 values, got {raw.size}"
        )
    return ids, raw.reshape(len(ids), width).astype(np.float64)


def build_similarity_from_features(table: FeatureTable) -> SimilarityMatrix:
    """Cosine similarity matrix over feature rows, bounds [-1, 1]."""
    sim = _mirrored_cosine(table.vectors, (-1.0, 1.0))
    return SimilarityMatrix(item_ids=table.item_ids, sim=sim, bounds=(-1.0, 1.0))


def diversity_proxy(sim: SimilarityMatrix, item_ids) -> float:
    """Mean pairwise similarity among a recommendation list.

    Lower means more diverse; comparable across arms when each list is
    measured in its own arm's matrix.
    """
    idx = [sim.index_of(item_id) for item_id in item_ids]
    if len(idx) < 2:
        raise ValidationError("diversity proxy needs at least two items")
    total = 0.0
    pairs = 0
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            total += float(sim.sim[idx[a], idx[b]])
            pairs += 1
    return total / pairs
