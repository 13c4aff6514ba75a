"""Model-selection diagnostics: coherence, K sweeps, inter-topic map.

Coherence is the UMass intrinsic variant: pair statistics come from
document co-occurrence in the training corpus itself, so no reference
corpus is needed and the score is bit-reproducible.  The topic map
embeds pairwise Jensen-Shannon divergence with classical MDS; the
squared embedding distance is 2*JSD, whose square root is a proper
metric, so exactly-embeddable configurations are reproduced exactly.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .errors import ValidationError
from .lda import LdaHyperparams, TopicModel, top_words, train


@dataclass(frozen=True)
class CoherenceReport:
    per_topic: tuple[float, ...]
    mean: float
    top_n: int
    variant: str = "umass"

    def check_invariants(self) -> None:
        if abs(self.mean - sum(self.per_topic) / len(self.per_topic)) > 1e-12:
            raise ValidationError("mean does not match per-topic scores")

    def to_json_dict(self) -> dict:
        return {
            "per_topic": list(self.per_topic),
            "mean": self.mean,
            "top_n": self.top_n,
            "variant": self.variant,
        }


@dataclass(frozen=True)
class TopicMap:
    coords: np.ndarray  # K x 2
    prevalence: np.ndarray  # length K, sums to 1

    def check_invariants(self) -> None:
        if self.coords.shape != (len(self.prevalence), 2):
            raise ValidationError("coords must be K x 2")
        if np.any(self.prevalence < 0):
            raise ValidationError("prevalence must be non-negative")
        if abs(float(self.prevalence.sum()) - 1.0) > 1e-9:
            raise ValidationError("prevalence must sum to 1")

    def to_json_dict(self) -> dict:
        return {
            "coords": [[float(x), float(y)] for x, y in self.coords],
            "prevalence": [float(p) for p in self.prevalence],
        }


def _doc_sets(corpus: Corpus) -> list[set[int]]:
    """For each vocabulary id, the set of documents containing it."""
    sets: list[set[int]] = [set() for _ in corpus.vocabulary.terms]
    for d, (_, tokens) in enumerate(corpus.documents):
        for w in set(tokens.tolist()):
            sets[w].add(d)
    return sets


def coherence(model: TopicModel, corpus: Corpus, top_n: int = 10) -> CoherenceReport:
    """Per-topic UMass coherence over each topic's `top_n` words.

    For words ordered by descending probability, every pair (w_i, w_j)
    with i < j contributes log((cooccur + 1) / doc_count(w_j)); the
    denominator always belongs to the lower-probability word.  `top_n`
    is clamped to the vocabulary size.
    """
    if top_n < 2:
        raise ValidationError("top_n must be at least 2")
    top_n = min(top_n, len(corpus.vocabulary))
    doc_sets = _doc_sets(corpus)
    term_to_id = corpus.vocabulary.term_to_id

    per_topic = []
    for k in range(model.K):
        words = top_words(model, k, top_n)
        ids = []
        for term, _ in words:
            if term not in term_to_id:
                raise ValidationError(
                    f"term {term!r} not in the corpus; coherence needs the "
                    "training corpus"
                )
            ids.append(term_to_id[term])
        score = 0.0
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                co = len(doc_sets[ids[i]] & doc_sets[ids[j]])
                score += math.log((co + 1) / len(doc_sets[ids[j]]))
        per_topic.append(score)

    return CoherenceReport(
        per_topic=tuple(per_topic),
        mean=sum(per_topic) / len(per_topic),
        top_n=top_n,
    )


def coherence_sweep(
    corpus: Corpus,
    k_values,
    hyper: LdaHyperparams,
    top_n: int = 10,
    csv_path: str | Path | None = None,
    json_path: str | Path | None = None,
) -> list[tuple[int, float]]:
    """Train one model per K and report mean coherence for each.

    `hyper` is a template: its K is replaced per entry and its seed is
    offset by the entry's position, so runs are reproducible yet the
    chains stay independent.  Optionally writes a `K,mean_coherence`
    CSV and a JSON file with per-topic detail.
    """
    k_values = list(k_values)
    if not k_values:
        raise ValidationError("k_values must be non-empty")
    if any(k < 2 for k in k_values):
        raise ValidationError("sweep requires every K >= 2")

    rows: list[tuple[int, float]] = []
    detail = []
    for index, k in enumerate(k_values):
        model = train(corpus, hyper.replace(K=k, seed=hyper.seed + index))
        report = coherence(model, corpus, top_n=top_n)
        rows.append((k, report.mean))
        detail.append({"K": k, **report.to_json_dict()})

    if csv_path is not None:
        with open(csv_path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["K", "mean_coherence"])
            for k, mean in rows:
                writer.writerow([k, repr(mean)])
    if json_path is not None:
        with open(json_path, "w", encoding="utf-8") as f:
            json.dump(detail, f, indent=2, sort_keys=True)
            f.write("\n")
    return rows


def js_divergence(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon divergence in nats; 0 for identical, log 2 max."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    m = 0.5 * (p + q)
    # 0 * log(0/m) is 0 by continuity; mask to avoid warnings
    kl_pm = np.where(p > 0, p * np.log(np.where(p > 0, p / m, 1.0)), 0.0)
    kl_qm = np.where(q > 0, q * np.log(np.where(q > 0, q / m, 1.0)), 0.0)
    # cancellation on (near-)identical inputs can dip a hair below zero
    return max(float(0.5 * kl_pm.sum() + 0.5 * kl_qm.sum()), 0.0)


def jsd_matrix(phi: np.ndarray) -> np.ndarray:
    """Symmetric K x K matrix of pairwise JS divergences between rows."""
    k = phi.shape[0]
    out = np.zeros((k, k))
    for a in range(k):
        for b in range(a + 1, k):
            out[a, b] = out[b, a] = js_divergence(phi[a], phi[b])
    return out


def _classical_mds(d_squared: np.ndarray) -> np.ndarray:
    """Embed a squared-distance matrix into 2 dimensions.

    Double-center, take the top two eigenpairs, scale eigenvectors by
    the root of their (non-negative part of the) eigenvalues.  Degenerate
    configurations simply collapse onto fewer axes.
    """
    n = d_squared.shape[0]
    centering = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * centering @ d_squared @ centering
    values, vectors = np.linalg.eigh(b)
    # eigenvalues within rounding noise of zero would otherwise leak
    # sqrt(noise)-sized coordinates into degenerate configurations
    cutoff = float(values.max(initial=0.0)) * n * np.finfo(np.float64).eps
    coords = np.zeros((n, 2))
    for axis, idx in enumerate(np.argsort(values)[::-1][:2]):
        if values[idx] > cutoff:
            coords[:, axis] = vectors[:, idx] * math.sqrt(values[idx])
    return coords


def topic_map(model: TopicModel) -> TopicMap:
    """2-D layout of topics plus their corpus-wide prevalence.

    Distances are Jensen-Shannon divergences between phi rows, embedded
    by classical MDS (squared embedding distance = 2*JSD, a metric).
    Axis signs are canonicalized so topic 0 sits at non-negative x and y.
    prevalence[k] = sum_d theta[d, k] * len(d) / total_tokens.
    """
    if model.K < 2:
        raise ValidationError("topic map needs at least 2 topics")
    coords = _classical_mds(2.0 * jsd_matrix(model.phi))
    for axis in range(2):
        if coords[0, axis] < 0:
            coords[:, axis] = -coords[:, axis]

    lengths = model.doc_lengths.astype(np.float64)
    prevalence = model.theta.T @ lengths / lengths.sum()

    result = TopicMap(coords=coords, prevalence=prevalence)
    result.check_invariants()
    return result
