"""Session-wide fixtures: sample data paths and one shared trained model."""

from __future__ import annotations

from importlib import resources

import pytest

from topicrec.corpus import PreprocessConfig, build_corpus, load_items
from topicrec.lda import LdaHyperparams, train
from topicrec.recommend import build_similarity

_DATA = resources.files("topicrec") / "data"


@pytest.fixture(scope="session")
def sample_items_path() -> str:
    return str(_DATA / "sample_items.jsonl")


@pytest.fixture(scope="session")
def sample_features_path() -> str:
    return str(_DATA / "sample_features.csv")


@pytest.fixture(scope="session")
def sample_items(sample_items_path):
    return load_items(sample_items_path)


@pytest.fixture(scope="session")
def sample_corpus(sample_items):
    return build_corpus(sample_items, enrich=True, config=PreprocessConfig())


@pytest.fixture(scope="session")
def sample_model(sample_corpus):
    # small iteration budget: the suite needs a valid model, not a good one
    return train(sample_corpus, LdaHyperparams(K=5, iterations=150, seed=7))


@pytest.fixture(scope="session")
def sample_similarity(sample_model):
    return build_similarity(sample_model)
