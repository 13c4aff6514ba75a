"""Shared construction helpers for the test suite."""

from __future__ import annotations

import numpy as np

from topicrec.corpus import Corpus, Vocabulary
from topicrec.rng import SplitMix64


def make_corpus(docs: dict[str, list[str]]) -> Corpus:
    """Build a Corpus straight from term lists, bypassing text cleanup.

    Keys are item ids, values are token strings.  Vocabulary is the
    sorted union; documents are sorted by item id, matching what
    build_corpus produces.
    """
    vocab = Vocabulary(sorted({t for toks in docs.values() for t in toks}))
    documents = tuple(
        (item_id, np.array([vocab.id_of(t) for t in docs[item_id]], dtype=np.int32))
        for item_id in sorted(docs)
    )
    total = sum(len(toks) for _, toks in documents)
    return Corpus(
        vocabulary=vocab, documents=documents, M=len(documents), total_tokens=total
    )


def synthetic_topic_corpus(
    n_topics: int = 3,
    words_per_topic: int = 30,
    n_docs: int = 60,
    doc_len: int = 100,
    seed: int = 2024,
) -> tuple[Corpus, list[set[str]]]:
    """Corpus drawn from disjoint per-topic vocabularies, theta one-hot.

    Each document picks one generating topic round-robin and draws all
    its tokens uniformly from that topic's private word set.  Returns
    the corpus plus the generating word sets for recovery checks.
    """
    topic_words = [
        [f"t{k}w{i:03d}" for i in range(words_per_topic)] for k in range(n_topics)
    ]
    rng = SplitMix64(seed)
    docs = {}
    for d in range(n_docs):
        words = topic_words[d % n_topics]
        docs[f"D{d:03d}"] = [words[rng.randint(len(words))] for _ in range(doc_len)]
    return make_corpus(docs), [set(words) for words in topic_words]


def brute_force_cosine(matrix: np.ndarray) -> np.ndarray:
    """O(M^2 F) pairwise cosine, the oracle for similarity builders."""
    m = matrix.shape[0]
    out = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            ni = np.sqrt(float(np.dot(matrix[i], matrix[i])))
            nj = np.sqrt(float(np.dot(matrix[j], matrix[j])))
            out[i, j] = float(np.dot(matrix[i], matrix[j])) / (ni * nj)
    return out
