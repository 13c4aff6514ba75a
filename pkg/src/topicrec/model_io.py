"""Versioned model persistence: canonical binary container + JSON export.

Binary layout (little-endian throughout):

    magic  8 bytes  b"TOPICREC"
    u32    format version (currently 1)
    u32    section count
    then per section: 8-byte ASCII tag, u64 payload length, payload

Required sections hold the hyperparameters, vocabulary, item ids, document
lengths, theta and phi (row-major float64).  Optional sections carry the
preprocessing recipe and the similarity matrices, so one file can feed the
whole service.  Writing is deterministic: the same model always produces
the same bytes.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Vocabulary
from .errors import ModelFormatError
from .lda import LdaHyperparams, TopicModel
from .recommend import SimilarityMatrix

MAGIC = b"TOPICREC"
FORMAT_VERSION = 1

_TAG_HYPER = b"HYPER   "
_TAG_VOCAB = b"VOCAB   "
_TAG_ITEMS = b"ITEMS   "
_TAG_DOCLEN = b"DOCLEN  "
_TAG_THETA = b"THETA   "
_TAG_PHI = b"PHI     "
_TAG_PREP = b"PREP    "
_TAG_SIM_LDA = b"SIMLDA  "
_TAG_SIM_FEAT = b"SIMFEAT "


@dataclass
class ModelArchive:
    """Everything a model file can carry."""

    model: TopicModel
    sim_lda: SimilarityMatrix | None = None
    sim_features: SimilarityMatrix | None = None
    prep: dict | None = None  # preprocess recipe: config values + enrich flag


def _pack_strings(strings) -> bytes:
    chunks = [struct.pack("<I", len(strings))]
    for s in strings:
        raw = s.encode("utf-8")
        chunks.append(struct.pack("<I", len(raw)))
        chunks.append(raw)
    return b"".join(chunks)


def _unpack_strings(payload: bytes) -> list[str]:
    (count,) = struct.unpack_from("<I", payload, 0)
    offset = 4
    out = []
    for _ in range(count):
        (n,) = struct.unpack_from("<I", payload, offset)
        offset += 4
        out.append(payload[offset:offset + n].decode("utf-8"))
        offset += n
    return out


def _pack_matrix(mat: np.ndarray) -> bytes:
    rows, cols = mat.shape
    body = np.ascontiguousarray(mat, dtype="<f8").tobytes()
    return struct.pack("<II", rows, cols) + body


def _unpack_matrix(payload: bytes) -> np.ndarray:
    rows, cols = struct.unpack_from("<II", payload, 0)
    mat = np.frombuffer(payload, dtype="<f8", offset=8, count=rows * cols)
    return mat.reshape(rows, cols).copy()


def _pack_sim(sim: SimilarityMatrix) -> bytes:
    lo, hi = sim.bounds
    return struct.pack("<dd", lo, hi) + _pack_matrix(sim.sim)


def _unpack_sim(payload: bytes, item_ids: tuple[str, ...]) -> SimilarityMatrix:
    lo, hi = struct.unpack_from("<dd", payload, 0)
    mat = _unpack_matrix(payload[16:])
    return SimilarityMatrix(item_ids=item_ids, sim=mat, bounds=(lo, hi))


def save_model(path: str | Path, archive: ModelArchive) -> None:
    """Write the archive to `path`; the byte stream is deterministic."""
    m = archive.model
    h = m.hyper
    sections: list[tuple[bytes, bytes]] = [
        (
            _TAG_HYPER,
            struct.pack(
                "<IddIIQB",
                h.K, h.alpha, h.beta, h.iterations, h.burn_in, h.seed,
                1 if h.average else 0,
            ),
        ),
        (_TAG_VOCAB, _pack_strings(m.vocabulary.terms)),
        (_TAG_ITEMS, _pack_strings(m.item_ids)),
        (
            _TAG_DOCLEN,
            np.ascontiguousarray(m.doc_lengths, dtype="<i8").tobytes(),
        ),
        (_TAG_THETA, _pack_matrix(m.theta)),
        (_TAG_PHI, _pack_matrix(m.phi)),
    ]
    if archive.prep is not None:
        sections.append(
            (_TAG_PREP, json.dumps(archive.prep, sort_keys=True).encode("utf-8"))
        )
    if archive.sim_lda is not None:
        sections.append((_TAG_SIM_LDA, _pack_sim(archive.sim_lda)))
    if archive.sim_features is not None:
        sections.append((_TAG_SIM_FEAT, _pack_sim(archive.sim_features)))

    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<II", FORMAT_VERSION, len(sections)))
        for tag, payload in sections:
            f.write(tag)
            f.write(struct.pack("<Q", len(payload)))
            f.write(payload)


def load_model(path: str | Path) -> ModelArchive:
    """Read a model archive back; raises ModelFormatError on bad files."""
    with open(path, "rb") as f:
        blob = f.read()
    if blob[:8] != MAGIC:
        raise ModelFormatError(f"{path}: not a model file (bad magic)")
    version, n_sections = struct.unpack_from("<II", blob, 8)
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported format version {version} (expected {FORMAT_VERSION})"
        )

    sections: dict[bytes, bytes] = {}
    offset = 16
    for _ in range(n_sections):
        if offset + 16 > len(blob):
            raise ModelFormatError(f"{path}: truncated section header")
        tag = blob[offset:offset + 8]
        (length,) = struct.unpack_from("<Q", blob, offset + 8)
        offset += 16
        if offset + length > len(blob):
            raise ModelFormatError(f"{path}: truncated section {tag!r}")
        sections[tag] = blob[offset:offset + length]
        offset += length

    required = (_TAG_HYPER, _TAG_VOCAB, _TAG_ITEMS, _TAG_DOCLEN, _TAG_THETA, _TAG_PHI)
    for tag in required:
        if tag not in sections:
            raise ModelFormatError(f"{path}: missing section {tag.strip().decode()}")

    K, alpha, beta, iterations, burn_in, seed, average = struct.unpack(
        "<IddIIQB", sections[_TAG_HYPER]
    )
    hyper = LdaHyperparams(
        K=K, alpha=alpha, beta=beta, iterations=iterations,
        burn_in=burn_in, seed=seed, average=bool(average),
    )
    vocabulary = Vocabulary(_unpack_strings(sections[_TAG_VOCAB]))
    item_ids = tuple(_unpack_strings(sections[_TAG_ITEMS]))
    doc_lengths = np.frombuffer(sections[_TAG_DOCLEN], dtype="<i8").copy()
    model = TopicModel(
        hyper=hyper,
        vocabulary=vocabulary,
        theta=_unpack_matrix(sections[_TAG_THETA]),
        phi=_unpack_matrix(sections[_TAG_PHI]),
        item_ids=item_ids,
        doc_lengths=doc_lengths,
    )
    model.check_invariants()

    prep = None
    if _TAG_PREP in sections:
        prep = json.loads(sections[_TAG_PREP].decode("utf-8"))
    sim_lda = (
        _unpack_sim(sections[_TAG_SIM_LDA], item_ids)
        if _TAG_SIM_LDA in sections else None
    )
    sim_features = (
        _unpack_sim(sections[_TAG_SIM_FEAT], item_ids)
        if _TAG_SIM_FEAT in sections else None
    )
    return ModelArchive(model=model, sim_lda=sim_lda, sim_features=sim_features, prep=prep)


def export_model_json(model: TopicModel) -> dict:
    """Debug export; floats survive a JSON round trip to full precision."""
    return {
        "format": "topicrec-model",
        "version": FORMAT_VERSION,
        "hyper": {
            "K": model.hyper.K,
            "alpha": model.hyper.alpha,
            "beta": model.hyper.beta,
            "iterations": model.hyper.iterations,
            "burn_in": model.hyper.burn_in,
            "seed": model.hyper.seed,
            "average": model.hyper.average,
        },
        "vocabulary": list(model.vocabulary.terms),
        "item_ids": list(model.item_ids),
        "doc_lengths": model.doc_lengths.tolist(),
        "theta": model.theta.tolist(),
        "phi": model.phi.tolist(),
    }


def model_from_json(data: dict) -> TopicModel:
    if data.get("format") != "topicrec-model":
        raise ModelFormatError("not a model JSON export")
    if data.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported JSON export version {data.get('version')}")
    model = TopicModel(
        hyper=LdaHyperparams(**data["hyper"]),
        vocabulary=Vocabulary(data["vocabulary"]),
        theta=np.array(data["theta"], dtype=np.float64),
        phi=np.array(data["phi"], dtype=np.float64),
        item_ids=tuple(data["item_ids"]),
        doc_lengths=np.array(data["doc_lengths"], dtype=np.int64),
    )
    model.check_invariants()
    return model
