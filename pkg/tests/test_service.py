"""Session store and HTTP API tests, including crash-replay scenarios."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from topicrec.corpus import PreprocessConfig, config_to_dict
from topicrec.errors import ParseError, ValidationError
from topicrec.features import build_similarity_from_features, load_features
from topicrec.lda import LdaHyperparams, train
from topicrec.model_io import ModelArchive
from topicrec.service import SessionStore, build_bundle, create_app

DEFAULT_PREP = {"enrich": True, "config": config_to_dict(PreprocessConfig())}


@pytest.fixture(scope="module")
def bundle(sample_items, sample_model, sample_corpus, sample_features_path):
    table = load_features(sample_features_path, item_ids=sample_model.item_ids)
    archive = ModelArchive(
        model=sample_model,
        sim_features=build_similarity_from_features(table),
        prep=DEFAULT_PREP,
    )
    return build_bundle(sample_items, archive)


@pytest.fixture
def client(bundle, tmp_path):
    store = SessionStore(tmp_path / "ratings.jsonl")
    app = create_app(bundle, store)
    with TestClient(app) as c:
        c.store = store
        yield c
    store.close()


# ---------------------------------------------------------------------------
# session store


def test_store_rate_and_profile(tmp_path):
    store = SessionStore(tmp_path / "log.jsonl")
    profile = store.rate("u1", "NG001", 5)
    assert profile.ratings == {"NG001": 5}
    store.rate("u1", "NG002", 2)
    store.rate("u2", "NG001", 3)
    assert store.profile("u1").ratings == {"NG001": 5, "NG002": 2}
    assert store.profile("u2").ratings == {"NG001": 3}
    assert store.user_ids == ("u1", "u2")
    assert store.profile("ghost") is None
    store.close()


def test_store_rerating_overwrites(tmp_path):
    store = SessionStore(tmp_path / "log.jsonl")
    store.rate("u", "NG001", 2)
    store.rate("u", "NG001", 5)
    assert store.profile("u").ratings == {"NG001": 5}
    store.close()


def test_store_profiles_are_copy_on_write(tmp_path):
    store = SessionStore(tmp_path / "log.jsonl")
    store.rate("u", "NG001", 4)
    before = store.profile("u")
    store.rate("u", "NG002", 1)
    assert before.ratings == {"NG001": 4}  # old snapshot untouched
    store.close()


def test_store_validates_inputs(tmp_path):
    store = SessionStore(tmp_path / "log.jsonl")
    with pytest.raises(ValidationError):
        store.rate("", "NG001", 3)
    with pytest.raises(ValidationError):
        store.rate("u", "NG001", 7)
    assert not store.user_ids
    store.close()


def test_store_record_is_on_disk_before_ack(tmp_path):
    log = tmp_path / "log.jsonl"
    store = SessionStore(log)
    store.rate("u", "NG003", 4)
    # read through a separate handle, as a crashed process would leave it
    lines = log.read_text().splitlines()
    assert json.loads(lines[-1]) == {"item_id": "NG003", "rating": 4, "user_id": "u"}
    store.close()


def test_store_replay_reconstructs_identical_profiles(tmp_path):
    log = tmp_path / "log.jsonl"
    first = SessionStore(log)
    first.rate("a", "NG001", 5)
    first.rate("b", "NG002", 1)
    first.rate("a", "NG001", 2)  # overwrite must replay in order
    snapshot = {u: first.profile(u).ratings for u in first.user_ids}
    first.close()

    second = SessionStore(log)
    assert {u: second.profile(u).ratings for u in second.user_ids} == snapshot
    second.close()


def test_store_drops_torn_final_line(tmp_path):
    log = tmp_path / "log.jsonl"
    store = SessionStore(log)
    store.rate("u", "NG001", 5)
    store.close()
    with open(log, "a", encoding="utf-8") as f:
        f.write('{"item_id":"NG002","rating":4,"us')  # crash mid-write

    recovered = SessionStore(log)
    assert recovered.profile("u").ratings == {"NG001": 5}
    # the torn bytes are gone, so appends cannot merge into them
    recovered.rate("u", "NG003", 3)
    recovered.close()
    replayed = SessionStore(log)
    assert replayed.profile("u").ratings == {"NG001": 5, "NG003": 3}
    replayed.close()


def test_store_rejects_corrupt_interior_line(tmp_path):
    log = tmp_path / "log.jsonl"
    log.write_text('{"item_id":"NG001","rating":5,"user_id":"u"}\nnot json\n')
    with pytest.raises(ParseError, match=r"log\.jsonl:2"):
        SessionStore(log)

    log.write_text('{"item_id":"NG001","rating":9,"user_id":"u"}\n')
    with pytest.raises(ParseError, match=r"log\.jsonl:1"):
        SessionStore(log)


# ---------------------------------------------------------------------------
# bundle assembly


def test_build_bundle_validates_item_universe(sample_items, sample_model):
    archive = ModelArchive(model=sample_model, prep=DEFAULT_PREP)
    with pytest.raises(ValidationError, match="item universe"):
        build_bundle(sample_items[:-1], archive)


def test_build_bundle_detects_wrong_recipe(sample_items, sample_model):
    wrong = {
        "enrich": False,  # the model was trained on enriched documents
        "config": config_to_dict(PreprocessConfig()),
    }
    archive = ModelArchive(model=sample_model, prep=wrong)
    with pytest.raises(ValidationError, match="vocabulary"):
        build_bundle(sample_items, archive)


def test_bundle_exposes_arms(bundle):
    assert bundle.arms == ["lda", "features"]
    assert bundle.similarity_for("lda") is bundle.sim_lda
    assert bundle.similarity_for("features") is bundle.sim_features
    with pytest.raises(ValidationError, match="unknown arm"):
        bundle.similarity_for("resnet")


def test_create_app_rejects_stale_log(bundle, tmp_path):
    log = tmp_path / "log.jsonl"
    log.write_text('{"item_id":"GONE999","rating":5,"user_id":"u"}\n')
    store = SessionStore(log)
    with pytest.raises(ValidationError, match="GONE999"):
        create_app(bundle, store)
    store.close()


# ---------------------------------------------------------------------------
# HTTP endpoints


def test_health(client, bundle):
    payload = client.get("/api/health").json()
    assert payload == {
        "status": "ok",
        "items": len(bundle.items),
        "topics": bundle.model.K,
        "arms": ["lda", "features"],
    }


def test_items_listing_and_lookup(client, bundle):
    listing = client.get("/api/items").json()["items"]
    assert [rec["item_id"] for rec in listing] == list(bundle.model.item_ids)
    assert set(listing[0]) == {
        "item_id", "artist_name", "painting_title", "painting_description",
        "publishing_date", "format", "size_class", "technique", "extra_texts",
    }

    one = client.get("/api/items/NG001").json()
    assert one["item_id"] == "NG001"
    assert client.get("/api/items/NOPE").status_code == 404


def test_topics_endpoint_clamps_top_n(client, bundle):
    payload = client.get("/api/topics", params={"top_n": 3}).json()
    assert payload["top_n"] == 3
    assert len(payload["topics"]) == bundle.model.K
    for entry in payload["topics"]:
        weights = [w["weight"] for w in entry["words"]]
        assert len(weights) == 3
        assert weights == sorted(weights, reverse=True)

    huge = client.get("/api/topics", params={"top_n": 10**6}).json()
    assert huge["top_n"] == len(bundle.model.vocabulary)
    assert client.get("/api/topics", params={"top_n": 0}).status_code == 422


def test_topic_map_endpoint(client, bundle):
    payload = client.get("/api/topic-map").json()
    assert len(payload["coords"]) == bundle.model.K
    assert sum(payload["prevalence"]) == pytest.approx(1.0, abs=1e-9)


def test_rating_roundtrip_and_read_your_writes(client):
    ack = client.put("/api/users/u7/ratings/NG001", json={"rating": 5})
    assert ack.status_code == 200
    assert ack.json() == {
        "user_id": "u7", "item_id": "NG001", "rating": 5, "n_ratings": 1,
    }

    recs = client.get("/api/users/u7/recommendations", params={"k": 5}).json()
    assert recs["user_id"] == "u7"
    assert recs["arm"] == "lda"
    assert len(recs["items"]) == 5
    assert "NG001" not in {e["item_id"] for e in recs["items"]}

    # a second rating is visible to the very next read
    client.put("/api/users/u7/ratings/NG021", json={"rating": 1})
    recs2 = client.get("/api/users/u7/recommendations", params={"k": 39}).json()
    ids = {e["item_id"] for e in recs2["items"]}
    assert "NG021" not in ids
    assert len(recs2["items"]) == 38


def test_rating_validation_errors(client):
    for bad in (0, 6, "five", None):
        resp = client.put("/api/users/u/ratings/NG001", json={"rating": bad})
        assert resp.status_code == 422
    assert client.put("/api/users/u/ratings/MISSING", json={"rating": 3}).status_code == 404
    # nothing acknowledged, so the user still has no profile
    assert client.get("/api/users/u/recommendations").status_code == 404


def test_recommendations_parameter_validation(client):
    client.put("/api/users/u/ratings/NG001", json={"rating": 4})
    assert client.get("/api/users/u/recommendations", params={"k": 0}).status_code == 422
    assert (
        client.get("/api/users/u/recommendations", params={"arm": "bogus"}).status_code
        == 422
    )


def test_recommendations_conflict_when_everything_rated(bundle, tmp_path):
    store = SessionStore(tmp_path / "log.jsonl")
    app = create_app(bundle, store)
    with TestClient(app) as c:
        for item_id in bundle.model.item_ids:
            assert c.put(f"/api/users/u/ratings/{item_id}", json={"rating": 3}).status_code == 200
        resp = c.get("/api/users/u/recommendations")
        assert resp.status_code == 409
        assert "nothing to recommend" in resp.json()["detail"]
    store.close()


def test_arm_parity_schema(client):
    client.put("/api/users/u/ratings/NG001", json={"rating": 5})
    client.put("/api/users/u/ratings/NG012", json={"rating": 2})
    lda = client.get("/api/users/u/recommendations", params={"k": 4, "arm": "lda"}).json()
    feat = client.get(
        "/api/users/u/recommendations", params={"k": 4, "arm": "features"}
    ).json()

    assert lda["arm"] == "lda" and feat["arm"] == "features"
    assert set(lda) == set(feat)
    assert set(lda["explanation"]) == set(feat["explanation"])
    for payload in (lda, feat):
        assert all(set(e) == {"item_id", "score"} for e in payload["items"])
        exp = payload["explanation"]
        assert all(set(e) == {"topic", "weight"} for e in exp["prominent_topics"])
        assert all(set(e) == {"term", "weight"} for e in exp["term_weights"])
        assert set(exp["per_item_theta"]) == {e["item_id"] for e in payload["items"]}
        assert all(len(v) == 5 for v in exp["per_item_theta"].values())
    # same schema, different rankings on this corpus
    assert [e["item_id"] for e in lda["items"]] != [e["item_id"] for e in feat["items"]]


def test_features_arm_absent_is_404(sample_items, sample_model, tmp_path):
    archive = ModelArchive(model=sample_model, prep=DEFAULT_PREP)
    bundle = build_bundle(sample_items, archive)
    store = SessionStore(tmp_path / "log.jsonl")
    app = create_app(bundle, store)
    with TestClient(app) as c:
        assert c.get("/api/health").json()["arms"] == ["lda"]
        c.put("/api/users/u/ratings/NG001", json={"rating": 5})
        resp = c.get("/api/users/u/recommendations", params={"arm": "features"})
        assert resp.status_code == 404
    store.close()


def test_single_topic_bundle_has_no_map(sample_items, sample_corpus, tmp_path):
    model = train(sample_corpus, LdaHyperparams(K=1, iterations=20, seed=0))
    bundle = build_bundle(sample_items, ModelArchive(model=model, prep=DEFAULT_PREP))
    assert bundle.map is None
    store = SessionStore(tmp_path / "log.jsonl")
    app = create_app(bundle, store)
    with TestClient(app) as c:
        assert c.get("/api/topic-map").status_code == 404
        assert c.get("/api/health").json()["topics"] == 1
    store.close()


def test_restart_preserves_acknowledged_state(bundle, tmp_path):
    log = tmp_path / "ratings.jsonl"
    store = SessionStore(log)
    app = create_app(bundle, store)
    with TestClient(app) as c:
        c.put("/api/users/u/ratings/NG001", json={"rating": 5})
        c.put("/api/users/u/ratings/NG002", json={"rating": 1})
        before = c.get("/api/users/u/recommendations", params={"k": 10}).json()
    store.close()  # simulated kill: nothing but the log survives

    store2 = SessionStore(log)
    app2 = create_app(bundle, store2)
    with TestClient(app2) as c2:
        after = c2.get("/api/users/u/recommendations", params={"k": 10}).json()
    assert after == before
    store2.close()
