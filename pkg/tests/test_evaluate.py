"""Coherence, sweep, and topic-map tests with hand-derived expectations."""

from __future__ import annotations

import csv
import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import make_corpus, synthetic_topic_corpus
from topicrec.corpus import Vocabulary
from topicrec.errors import ValidationError
from topicrec.evaluate import (
    CoherenceReport,
    TopicMap,
    coherence,
    coherence_sweep,
    jsd_matrix,
    js_divergence,
    topic_map,
    train,
)
from topicrec.lda import LdaHyperparams, TopicModel, top_words

distributions = st.lists(
    st.floats(min_value=1e-6, max_value=1.0), min_size=4, max_size=4
).map(lambda v: np.array(v) / sum(v))


def single_topic_model(corpus) -> TopicModel:
    return train(corpus, LdaHyperparams(K=1, iterations=5, seed=0))


# ---------------------------------------------------------------------------
# coherence


def test_coherence_pair_in_every_document():
    # top two words co-occur in all 3 docs, second word appears in all 3:
    # the lone pair contributes log((3 + 1) / 3)
    corpus = make_corpus({
        "A": ["app"] * 3 + ["bee"] * 2 + ["fill1"],
        "B": ["app"] * 3 + ["bee"] * 2 + ["fill2"],
        "C": ["app"] * 3 + ["bee"] * 2 + ["fill3"],
    })
    model = single_topic_model(corpus)
    assert [t for t, _ in top_words(model, 0, 2)] == ["app", "bee"]
    report = coherence(model, corpus, top_n=2)
    assert report.per_topic[0] == pytest.approx(math.log(4 / 3), abs=1e-12)
    assert report.mean == report.per_topic[0]
    assert report.top_n == 2
    assert report.variant == "umass"


def test_coherence_pair_that_never_cooccurs():
    # "app" in two docs, "bee" in two others: cooccur 0, doc_count(bee) 2,
    # so the pair contributes log(1 / 2)
    corpus = make_corpus({
        "A": ["app", "app"],
        "B": ["app", "app"],
        "C": ["bee", "bee", "fill"],
        "D": ["bee"],
    })
    model = single_topic_model(corpus)
    assert [t for t, _ in top_words(model, 0, 2)] == ["app", "bee"]
    report = coherence(model, corpus, top_n=2)
    assert report.per_topic[0] == pytest.approx(math.log(0.5), abs=1e-12)


def test_coherence_matches_exhaustive_pair_loop(sample_model, sample_corpus):
    report = coherence(sample_model, sample_corpus, top_n=8)

    containing = {}
    for d, (_, tokens) in enumerate(sample_corpus.documents):
        for w in set(tokens.tolist()):
            containing.setdefault(w, set()).add(d)

    for k in range(sample_model.K):
        ranked = [
            sample_corpus.vocabulary.id_of(t) for t, _ in top_words(sample_model, k, 8)
        ]
        want = sum(
            math.log(
                (len(containing.get(wi, set()) & containing.get(wj, set())) + 1)
                / len(containing[wj])
            )
            for wi, wj in itertools.combinations(ranked, 2)
        )
        assert report.per_topic[k] == pytest.approx(want, abs=1e-12)
    report.check_invariants()


def test_coherence_repeat_calls_bit_identical(sample_model, sample_corpus):
    a = coherence(sample_model, sample_corpus)
    b = coherence(sample_model, sample_corpus)
    assert a.per_topic == b.per_topic
    assert a.mean == b.mean


def test_coherence_top_n_clamped_to_vocabulary():
    corpus = make_corpus({"A": ["one", "two", "two"], "B": ["one", "two"]})
    model = single_topic_model(corpus)
    report = coherence(model, corpus, top_n=50)
    assert report.top_n == 2


def test_coherence_rejects_tiny_top_n(sample_model, sample_corpus):
    with pytest.raises(ValidationError, match="top_n"):
        coherence(sample_model, sample_corpus, top_n=1)


def test_coherence_needs_the_training_corpus(sample_model):
    other = make_corpus({"A": ["unrelated", "words"]})
    with pytest.raises(ValidationError, match="training corpus"):
        coherence(sample_model, other)


def test_coherence_report_invariant():
    report = CoherenceReport(per_topic=(1.0, 3.0), mean=2.5, top_n=5)
    with pytest.raises(ValidationError):
        report.check_invariants()


# ---------------------------------------------------------------------------
# sweep


def test_sweep_single_k():
    corpus, _ = synthetic_topic_corpus(n_docs=24, doc_len=40)
    hyper = LdaHyperparams(K=2, iterations=50, seed=3)
    rows = coherence_sweep(corpus, [3], hyper)
    assert len(rows) == 1
    assert rows[0][0] == 3


def test_sweep_deterministic_and_seed_offset_by_position():
    corpus, _ = synthetic_topic_corpus(n_docs=24, doc_len=40)
    hyper = LdaHyperparams(K=2, iterations=50, seed=10)
    rows = coherence_sweep(corpus, [4, 2], hyper, top_n=6)
    assert rows == coherence_sweep(corpus, [4, 2], hyper, top_n=6)

    # position 0 runs at the template seed, position 1 at seed + 1
    m0 = train(corpus, hyper.replace(K=4, seed=10))
    m1 = train(corpus, hyper.replace(K=2, seed=11))
    assert rows[0] == (4, coherence(m0, corpus, top_n=6).mean)
    assert rows[1] == (2, coherence(m1, corpus, top_n=6).mean)


def test_sweep_emits_parsable_csv_and_json(tmp_path):
    corpus, _ = synthetic_topic_corpus(n_docs=24, doc_len=40)
    hyper = LdaHyperparams(K=2, iterations=50, seed=1)
    csv_path = tmp_path / "sweep.csv"
    json_path = tmp_path / "sweep.json"
    rows = coherence_sweep(
        corpus, [2, 3], hyper, csv_path=csv_path, json_path=json_path
    )

    with open(csv_path, newline="") as f:
        parsed = list(csv.reader(f))
    assert parsed[0] == ["K", "mean_coherence"]
    assert [(int(k), float(m)) for k, m in parsed[1:]] == rows

    detail = json.loads(json_path.read_text())
    assert [entry["K"] for entry in detail] == [2, 3]
    for (_, mean), entry in zip(rows, detail):
        assert entry["mean"] == mean
        assert entry["mean"] == pytest.approx(
            sum(entry["per_topic"]) / len(entry["per_topic"]), abs=1e-12
        )


@pytest.mark.parametrize("bad", [[], [1, 3], [0]])
def test_sweep_rejects_bad_k_values(bad):
    corpus = make_corpus({"A": ["w1", "w2"], "B": ["w2", "w3"]})
    with pytest.raises(ValidationError):
        coherence_sweep(corpus, bad, LdaHyperparams(K=2, iterations=5, seed=0))


# ---------------------------------------------------------------------------
# Jensen-Shannon divergence


def test_jsd_known_values():
    assert js_divergence([1.0, 0.0], [0.0, 1.0]) == pytest.approx(math.log(2))
    assert js_divergence([0.5, 0.5], [0.5, 0.5]) == 0.0
    # p = (1, 0), q = (0.5, 0.5): m = (0.75, 0.25)
    want = 0.5 * math.log(1 / 0.75) + 0.5 * (
        0.5 * math.log(0.5 / 0.75) + 0.5 * math.log(0.5 / 0.25)
    )
    assert js_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(want, abs=1e-15)


@given(distributions, distributions)
@settings(max_examples=60, deadline=None)
def test_jsd_properties(p, q):
    d = js_divergence(p, q)
    assert 0.0 <= d <= math.log(2) + 1e-12
    assert js_divergence(q, p) == pytest.approx(d, abs=1e-12)
    assert js_divergence(p, p) == 0.0


@given(st.lists(distributions, min_size=2, max_size=5))
@settings(max_examples=30, deadline=None)
def test_jsd_matrix_properties(rows):
    phi = np.stack(rows)
    mat = jsd_matrix(phi)
    assert np.array_equal(mat, mat.T)
    assert np.all(np.diag(mat) == 0.0)
    assert np.all(mat >= 0.0)
    assert np.all(mat <= math.log(2) + 1e-12)


# ---------------------------------------------------------------------------
# topic map


def map_model(phi: np.ndarray, doc_lengths=None, theta=None) -> TopicModel:
    k, v = phi.shape
    if theta is None:
        theta = np.full((2, k), 1.0 / k)
    if doc_lengths is None:
        doc_lengths = np.array([5, 5])
    return TopicModel(
        hyper=LdaHyperparams(K=k, iterations=1, seed=0),
        vocabulary=Vocabulary([f"w{i}" for i in range(v)]),
        theta=np.asarray(theta, dtype=np.float64),
        phi=phi.astype(np.float64),
        item_ids=tuple(f"D{i}" for i in range(len(doc_lengths))),
        doc_lengths=np.asarray(doc_lengths),
    )


def test_topic_map_two_disjoint_topics_closed_form():
    # disjoint supports: JSD = log 2, so the two points sit at
    # +/- sqrt(2 * log 2) / 2 on one axis and 0 on the other
    phi = np.array([[0.5, 0.5, 0.0, 0.0], [0.0, 0.0, 0.5, 0.5]])
    result = topic_map(map_model(phi))
    half = math.sqrt(2.0 * math.log(2)) / 2.0
    x = result.coords[:, 0]
    assert x[0] == pytest.approx(half, abs=1e-9)
    assert x[1] == pytest.approx(-half, abs=1e-9)
    assert np.allclose(result.coords[:, 1], 0.0, atol=1e-9)


def test_topic_map_duplicate_topics_coincide():
    phi = np.array([
        [0.7, 0.1, 0.1, 0.1],
        [0.7, 0.1, 0.1, 0.1],
        [0.1, 0.1, 0.1, 0.7],
    ])
    result = topic_map(map_model(phi, theta=np.full((2, 3), 1 / 3)))
    gap = np.linalg.norm(result.coords[0] - result.coords[1])
    assert gap <= 1e-9
    assert np.linalg.norm(result.coords[0] - result.coords[2]) > 0.1


def test_topic_map_three_point_embedding_is_faithful():
    # three points always embed exactly in the plane when the distance
    # is a metric, which sqrt(2 * JSD) is
    rng = np.random.default_rng(5)
    phi = rng.dirichlet(np.ones(6), size=3)
    result = topic_map(map_model(phi, theta=np.full((2, 3), 1 / 3)))
    target = np.sqrt(2.0 * jsd_matrix(phi))
    for a in range(3):
        for b in range(3):
            got = np.linalg.norm(result.coords[a] - result.coords[b])
            assert got == pytest.approx(target[a, b], abs=1e-6)


def test_topic_map_axis_signs_canonicalized():
    rng = np.random.default_rng(9)
    phi = rng.dirichlet(np.ones(5), size=4)
    result = topic_map(map_model(phi, theta=np.full((2, 4), 0.25)))
    assert result.coords[0, 0] >= 0.0
    assert result.coords[0, 1] >= 0.0


def test_topic_map_prevalence_hand_computed():
    phi = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])
    theta = np.array([[1.0, 0.0], [0.0, 1.0]])
    model = map_model(phi, doc_lengths=np.array([3, 1]), theta=theta)
    result = topic_map(model)
    assert np.allclose(result.prevalence, [0.75, 0.25], atol=1e-15)


def test_topic_map_prevalence_matches_token_shares(sample_model):
    result = topic_map(sample_model)
    lengths = sample_model.doc_lengths.astype(float)
    want = sample_model.theta.T @ lengths / lengths.sum()
    assert np.array_equal(result.prevalence, want)
    result.check_invariants()


def test_topic_map_requires_two_topics():
    corpus = make_corpus({"A": ["just", "words"]})
    model = train(corpus, LdaHyperparams(K=1, iterations=5, seed=0))
    with pytest.raises(ValidationError, match="at least 2"):
        topic_map(model)


def test_topic_map_invariant_violations():
    with pytest.raises(ValidationError):
        TopicMap(
            coords=np.zeros((3, 2)), prevalence=np.array([0.5, 0.5])
        ).check_invariants()
    with pytest.raises(ValidationError):
        TopicMap(
            coords=np.zeros((2, 2)), prevalence=np.array([0.9, -0.1])
        ).check_invariants()
    with pytest.raises(ValidationError):
        TopicMap(
            coords=np.zeros((2, 2)), prevalence=np.array([0.6, 0.6])
        ).check_invariants()


def test_topic_map_json_payload(sample_model):
    payload = topic_map(sample_model).to_json_dict()
    assert len(payload["coords"]) == sample_model.K
    assert all(len(xy) == 2 for xy in payload["coords"])
    assert sum(payload["prevalence"]) == pytest.approx(1.0, abs=1e-9)
