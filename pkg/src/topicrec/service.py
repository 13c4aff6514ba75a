"""HTTP service: immutable engine bundle plus a crash-safe ratings log.

The model side is read-only for the process lifetime, so request
handlers share one `EngineBundle` without locking.  Ratings go through
`SessionStore`, which appends to a JSON-lines log and fsyncs before the
in-memory profile (and therefore the HTTP acknowledgment) changes;
replaying the log reconstructs the exact same profiles after a crash.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from .corpus import (
    Corpus,
    ItemRecord,
    PreprocessConfig,
    build_corpus,
    config_from_dict,
)
from .errors import ParseError, ValidationError
from .evaluate import CoherenceReport, TopicMap, coherence, topic_map
from .lda import TopicModel, top_words
from .model_io import ModelArchive
from .recommend import (
    SimilarityMatrix,
    UserProfile,
    build_similarity,
    likert_to_weight,
    recommend,
)


class SessionStore:
    """User profiles backed by an append-only JSON-lines ratings log.

    Write path: serialize the record, append, flush, fsync, then update
    the in-memory profile.  Only after all of that does `rate` return,
    so an acknowledged rating is always on disk.  A torn final line
    (crash mid-write) was never acknowledged and is dropped on replay;
    a malformed earlier line means real corruption and raises.
    """

    def __init__(self, log_path: str | Path):
        self.log_path = Path(log_path)
        self._lock = threading.Lock()
        self._profiles: dict[str, UserProfile] = {}
        if self.log_path.exists():
            self._replay()
        self._file = open(self.log_path, "a", encoding="utf-8")

    def _replay(self) -> None:
        raw_bytes = self.log_path.read_bytes()
        lines = raw_bytes.decode("utf-8").split("\n")
        body, torn_tail = lines[:-1], lines[-1]
        for lineno, line in enumerate(body, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                user_id = str(record["user_id"])
                item_id = str(record["item_id"])
                rating = record["rating"]
                likert_to_weight(rating)
            except (ValueError, KeyError, TypeError, ValidationError) as exc:
                raise ParseError(
                    f"{self.log_path}:{lineno}: bad ratings record: {exc}"
                ) from exc
            self._apply(user_id, item_id, rating)
        if torn_tail:
            # a final line without its newline is a write that died before
            # the ack; drop it, and truncate so the next append starts clean
            keep = len(raw_bytes) - len(torn_tail.encode("utf-8"))
            with open(self.log_path, "r+b") as f:
                f.truncate(keep)

    def _apply(self, user_id: str, item_id: str, rating: int) -> UserProfile:
        old = self._profiles.get(user_id)
        ratings = dict(old.ratings) if old else {}
        ratings[item_id] = rating
        profile = UserProfile(user_id=user_id, ratings=ratings)
        self._profiles[user_id] = profile
        return profile

    def rate(self, user_id: str, item_id: str, rating: int) -> UserProfile:
        """Persist one rating and return the updated profile."""
        if not user_id:
            raise ValidationError("user_id must be non-empty")
        likert_to_weight(rating)
        line = json.dumps(
            {"item_id": item_id, "rating": rating, "user_id": user_id},
            sort_keys=True,
            separators=(",", ":"),
        )
        with self._lock:
            self._file.write(line + "\n")
            self._file.flush()
            os.fsync(self._file.fileno())
            return self._apply(user_id, item_id, rating)

    def profile(self, user_id: str) -> UserProfile | None:
        with self._lock:
            return self._profiles.get(user_id)

    @property
    def user_ids(self) -> tuple[str, ...]:
        with self._lock:
            return tuple(sorted(self._profiles))

    def close(self) -> None:
        self._file.close()


@dataclass
class EngineBundle:
    """Everything the read path needs, over one item_id universe."""

    items: tuple[ItemRecord, ...]
    corpus: Corpus
    model: TopicModel
    sim_lda: SimilarityMatrix
    sim_features: SimilarityMatrix | None
    map: TopicMap | None  # None only for single-topic models
    coherence_report: CoherenceReport

    def __post_init__(self):
        self.item_index = {record.item_id: record for record in self.items}
        self.check_invariants()

    def check_invariants(self) -> None:
        universe = tuple(record.item_id for record in self.items)
        for name, ids in (
            ("corpus", self.corpus.item_ids),
            ("model", self.model.item_ids),
            ("lda similarity", self.sim_lda.item_ids),
        ):
            if tuple(ids) != universe:
                raise ValidationError(f"{name} does not match the item universe")
        if self.sim_features is not None and (
            tuple(self.sim_features.item_ids) != universe
        ):
            raise ValidationError(
                "feature similarity does not match the item universe"
            )

    @property
    def arms(self) -> list[str]:
        return ["lda", "features"] if self.sim_features is not None else ["lda"]

    def similarity_for(self, arm: str) -> SimilarityMatrix:
        if arm == "lda":
            return self.sim_lda
        if arm == "features":
            if self.sim_features is None:
                raise ValidationError("features arm not available")
            return self.sim_features
        raise ValidationError(f"unknown arm {arm!r}")


def build_bundle(
    items: list[ItemRecord],
    archive: ModelArchive,
    top_n: int = 10,
) -> EngineBundle:
    """Assemble the serving bundle, re-deriving whatever the file omits.

    The corpus is rebuilt from the items with the preprocessing recipe
    stored in the archive, then cross-checked against the model; a
    mismatch means the items or recipe are not the ones the model was
    trained on.
    """
    ordered = tuple(sorted(items, key=lambda record: record.item_id))

    if archive.prep is not None:
        config = config_from_dict(archive.prep["config"])
        enrich = bool(archive.prep["enrich"])
    else:
        config = PreprocessConfig()
        enrich = True

    corpus = build_corpus(list(ordered), enrich=enrich, config=config)
    model = archive.model
    if corpus.item_ids != model.item_ids:
        raise ValidationError("items do not match the model's item universe")
    if corpus.vocabulary != model.vocabulary:
        raise ValidationError(
            "rebuilt corpus vocabulary differs from the model's; wrong "
            "items or preprocessing recipe"
        )

    return EngineBundle(
        items=ordered,
        corpus=corpus,
        model=model,
        sim_lda=archive.sim_lda or build_similarity(model),
        sim_features=archive.sim_features,
        map=topic_map(model) if model.K >= 2 else None,
        coherence_report=coherence(model, corpus, top_n=top_n),
    )


def _item_json(record: ItemRecord) -> dict:
    return {
        "item_id": record.item_id,
        "artist_name": record.artist_name,
        "painting_title": record.painting_title,
        "painting_description": record.painting_description,
        "publishing_date": record.publishing_date,
        "format": record.format,
        "size_class": record.size_class,
        "technique": record.technique,
        "extra_texts": list(record.extra_texts),
    }


class RatingBody(BaseModel):
    rating: int = Field(ge=1, le=5)


def create_app(
    bundle: EngineBundle,
    store: SessionStore,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Wire the JSON API around an immutable bundle and a ratings store."""
    for user_id in store.user_ids:
        profile = store.profile(user_id)
        unknown = sorted(set(profile.ratings) - set(bundle.item_index))
        if unknown:
            raise ValidationError(
                f"ratings log references unknown items {unknown} "
                f"for user {user_id!r}"
            )

    app = FastAPI(title="topicrec")

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "items": len(bundle.items),
            "topics": bundle.model.K,
            "arms": bundle.arms,
        }

    @app.get("/api/items")
    def list_items():
        return {"items": [_item_json(record) for record in bundle.items]}

    @app.get("/api/items/{item_id}")
    def get_item(item_id: str):
        record = bundle.item_index.get(item_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown item {item_id!r}")
        return _item_json(record)

    @app.get("/api/topics")
    def topics(top_n: int = Query(10, ge=1)):
        n = min(top_n, len(bundle.model.vocabulary))
        return {
            "top_n": n,
            "topics": [
                {
                    "topic": k,
                    "words": [
                        {"term": term, "weight": weight}
                        for term, weight in top_words(bundle.model, k, n)
                    ],
                }
                for k in range(bundle.model.K)
            ],
        }

    @app.get("/api/topic-map")
    def get_topic_map():
        if bundle.map is None:
            raise HTTPException(
                status_code=404,
                detail="topic map unavailable for single-topic models",
            )
        return bundle.map.to_json_dict()

    @app.put("/api/users/{user_id}/ratings/{item_id}")
    def put_rating(user_id: str, item_id: str, body: RatingBody):
        if item_id not in bundle.item_index:
            raise HTTPException(status_code=404, detail=f"unknown item {item_id!r}")
        profile = store.rate(user_id, item_id, body.rating)
        return {
            "user_id": user_id,
            "item_id": item_id,
            "rating": body.rating,
            "n_ratings": profile.N,
        }

    @app.get("/api/users/{user_id}/recommendations")
    def recommendations(
        user_id: str,
        k: int = Query(10, ge=1),
        arm: Literal["lda", "features"] = Query("lda"),
    ):
        if arm == "features" and bundle.sim_features is None:
            raise HTTPException(status_code=404, detail="features arm not available")
        profile = store.profile(user_id)
        if profile is None:
            raise HTTPException(
                status_code=404, detail=f"no ratings for user {user_id!r}"
            )
        try:
            result = recommend(profile, bundle.similarity_for(arm), k=k, model=bundle.model)
        except ValidationError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return {"user_id": user_id, "arm": arm, **result.to_json_dict()}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
