"""User profiles, similarity matrices, preference-expansion scoring.

An item's score for a user is the weighted average of its similarities to
everything the user has rated:

    S(p_i, u) = (1/N) * sum_j w_j * sim(p_i, p_j)

with weights w derived from 5-point Likert ratings via (r - 1) / 4 and N
the number of rated items.  Dividing by N rather than by the weight total
deflates all scores uniformly, so the ranking is unaffected.  Unrated
items are ranked by descending score, ties broken by ascending item id.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .lda import TopicModel


@dataclass
class SimilarityMatrix:
    """Dense pairwise item similarities, aligned with `item_ids`.

    Exactly symmetric (the upper triangle is computed once and mirrored).
    `bounds` records the valid entry range: [0, 1] for topic-distribution
    cosines, [-1, 1] for raw feature cosines.
    """

    item_ids: tuple[str, ...]
    sim: np.ndarray  # float64, M x M
    bounds: tuple[float, float] = (0.0, 1.0)
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.item_ids = tuple(self.item_ids)
        self._index = {item_id: i for i, item_id in enumerate(self.item_ids)}

    @property
    def M(self) -> int:
        return len(self.item_ids)

    def index_of(self, item_id: str) -> int:
        try:
            return self._index[item_id]
        except KeyError:
            raise ValidationError(f"unknown item {item_id!r}") from None

    def check_invariants(self) -> None:
        if self.sim.shape != (self.M, self.M):
            raise ValidationError("similarity matrix shape mismatch")
        if not np.array_equal(self.sim, self.sim.T):
            raise ValidationError("similarity matrix must be exactly symmetric")
        if not np.all(np.abs(np.diag(self.sim) - 1.0) <= 1e-9):
            raise ValidationError("similarity diagonal must be 1 within 1e-9")
        lo, hi = self.bounds
        if self.sim.min() < lo or self.sim.max() > hi:
            raise ValidationError(f"similarity entries outside [{lo}, {hi}]")


def _mirrored_cosine(rows: np.ndarray, bounds: tuple[float, float]) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms == 0.0):
        raise ValidationError("zero-norm row cannot be cosine-normalized")
    unit = rows / norms[:, None]
    gram = unit @ unit.T
    upper = np.triu(gram)
    sim = upper + np.triu(gram, 1).T  # mirror: sim[i,j] == sim[j,i] exactly
    return np.clip(sim, bounds[0], bounds[1])


def build_similarity(model: TopicModel) -> SimilarityMatrix:
    """Cosine similarities between per-document topic distributions."""
    sim = _mirrored_cosine(model.theta, (0.0, 1.0))
    return SimilarityMatrix(item_ids=model.item_ids, sim=sim, bounds=(0.0, 1.0))


def likert_to_weight(rating: int) -> float:
    """Map a 1..5 rating onto [0, 1]; the endpoints hit 0 and 1 exactly."""
    if rating not in (1, 2, 3, 4, 5):
        raise ValidationError(f"rating must be an integer in 1..5, got {rating!r}")
    return (rating - 1) / 4


@dataclass
class UserProfile:
    """Rated items with their derived weights.

    Rating 1 ("dislike") maps to weight 0: the item stops contributing to
    scores but still counts toward N.
    """

    user_id: str
    ratings: dict[str, int]

    def __post_init__(self):
        for item_id, rating in self.ratings.items():
            likert_to_weight(rating)  # validates the range

    @property
    def N(self) -> int:
        return len(self.ratings)

    @property
    def weights(self) -> dict[str, float]:
        return {item_id: likert_to_weight(r) for item_id, r in self.ratings.items()}

    def rate(self, item_id: str, rating: int) -> None:
        likert_to_weight(rating)
        self.ratings[item_id] = rating


@dataclass
class Explanation:
    """Why a set of recommendations hangs together, in topic space."""

    prominent_topics: list[tuple[int, float]]      # (topic id, weight), desc
    term_weights: list[tuple[str, float]]          # word-cloud payload, desc
    per_item_theta: dict[str, list[float]]         # item id -> topic distribution

    def to_json_dict(self) -> dict:
        return {
            "prominent_topics": [
                {"topic": k, "weight": w} for k, w in self.prominent_topics
            ],
            "term_weights": [
                {"term": t, "weight": w} for t, w in self.term_weights
            ],
            "per_item_theta": self.per_item_theta,
        }


@dataclass
class Recommendation:
    """Ranked top-k list plus its explanation."""

    ranked: list[tuple[str, float]]
    k: int
    explanation: Explanation | None

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "items": [
                {"item_id": item_id, "score": score} for item_id, score in self.ranked
            ],
            "explanation": (
                self.explanation.to_json_dict() if self.explanation else None
            ),
        }


def _profile_arrays(
    profile: UserProfile, sim: SimilarityMatrix
) -> tuple[np.ndarray, np.ndarray]:
    """Rated-item indices and weights, in deterministic (sorted id) order."""
    if profile.N < 1:
        raise ValidationError(f"user {profile.user_id!r} has no ratings")
    rated = sorted(profile.ratings)
    idx = np.array([sim.index_of(item_id) for item_id in rated], dtype=np.intp)
    w = np.array([likert_to_weight(profile.ratings[i]) for i in rated], dtype=np.float64)
    return idx, w


def _score_one(sim: SimilarityMatrix, row: int, idx: np.ndarray, w: np.ndarray) -> float:
    return float(np.dot(sim.sim[row, idx], w)) / len(idx)


def score(item_id: str, profile: UserProfile, sim: SimilarityMatrix) -> float:
    """Preference-expansion score of one item for one user."""
    row = sim.index_of(item_id)
    idx, w = _profile_arrays(profile, sim)
    return _score_one(sim, row, idx, w)


def recommend(
    profile: UserProfile,
    sim: SimilarityMatrix,
    k: int,
    model: TopicModel | None = None,
    top_terms: int = 25,
) -> Recommendation:
    """Score every unrated item, rank, truncate to k, explain.

    The explanation is attached when a topic model is supplied (always the
    topic model, whichever similarity arm produced the ranking).
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    idx, w = _profile_arrays(profile, sim)
    rated = set(profile.ratings)
    candidates = [item_id for item_id in sim.item_ids if item_id not in rated]
    if not candidates:
        raise ValidationError("nothing to recommend: every item is rated")

    scored = [
        (item_id, _score_one(sim, sim.index_of(item_id), idx, w))
        for item_id in candidates
    ]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    ranked = scored[:k]

    explanation = None
    if model is not None:
        explanation = explain(
            [item_id for item_id, _ in ranked], profile, model, top_terms
        )
    return Recommendation(ranked=ranked, k=k, explanation=explanation)


def explain(
    items,
    profile: UserProfile,
    model: TopicModel,
    top_terms: int = 25,
) -> Explanation:
    """Topic-space account of a recommendation set.

    Topics are ranked by their mean theta over the recommended items plus
    the positively-weighted rated items; the word-cloud weights are that
    topic mixture pushed through phi.
    """
    items = list(items)
    if not items:
        raise ValidationError("cannot explain an empty recommendation set")
    index = {item_id: i for i, item_id in enumerate(model.item_ids)}
    unknown = [item_id for item_id in items if item_id not in index]
    if unknown:
        raise ValidationError(f"items not in the model: {unknown}")

    pool = list(items)
    for item_id, rating in sorted(profile.ratings.items()):
        if likert_to_weight(rating) > 0 and item_id in index:
            pool.append(item_id)

    rows = np.array([index[item_id] for item_id in pool], dtype=np.intp)
    topic_weights = model.theta[rows].mean(axis=0)

    prominent = sorted(
        ((k, float(topic_weights[k])) for k in range(model.K)),
        key=lambda kw: (-kw[1], kw[0]),
    )
    mixture = topic_weights @ model.phi
    ranked_terms = sorted(
        zip(model.vocabulary.terms, mixture), key=lambda tw: (-tw[1], tw[0])
    )
    term_weights = [(t, float(wt)) for t, wt in ranked_terms[:top_terms]]

    per_item_theta = {
        item_id: model.theta[index[item_id]].tolist() for item_id in items
    }
    return Explanation(
        prominent_topics=prominent,
        term_weights=term_weights,
        per_item_theta=per_item_theta,
    )
