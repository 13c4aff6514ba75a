"""Topic-model-driven, explainable recommendations for art collections.

Pipeline: catalogue records -> cleaned token documents -> LDA via
collapsed Gibbs sampling -> per-item topic distributions -> cosine
similarity -> weighted top-k recommendations with topic explanations.
A feature-vector baseline arm shares the same ranking machinery.

The server (`topicrec.service`) and CLI (`topicrec.cli`) are imported
on demand; this namespace covers the library surface.
"""

from .corpus import (
    Corpus,
    ItemRecord,
    PreprocessConfig,
    Vocabulary,
    build_corpus,
    build_document,
    load_items,
    load_preprocess_config,
    preprocess,
)
from .errors import ModelFormatError, ParseError, TopicRecError, ValidationError
from .evaluate import (
    CoherenceReport,
    TopicMap,
    coherence,
    coherence_sweep,
    js_divergence,
    jsd_matrix,
    topic_map,
)
from .features import (
    FeatureTable,
    build_similarity_from_features,
    diversity_proxy,
    load_features,
)
from .lda import (
    LdaHyperparams,
    SamplerState,
    TopicModel,
    gibbs_sweep,
    infer_theta,
    init,
    top_words,
    train,
)
from .model_io import (
    ModelArchive,
    export_model_json,
    load_model,
    model_from_json,
    save_model,
)
from .recommend import (
    Explanation,
    Recommendation,
    SimilarityMatrix,
    UserProfile,
    build_similarity,
    explain,
    likert_to_weight,
    recommend,
    score,
)

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "ItemRecord",
    "PreprocessConfig",
    "Vocabulary",
    "build_corpus",
    "build_document",
    "load_items",
    "load_preprocess_config",
    "preprocess",
    "ModelFormatError",
    "ParseError",
    "TopicRecError",
    "ValidationError",
    "CoherenceReport",
    "TopicMap",
    "coherence",
    "coherence_sweep",
    "js_divergence",
    "jsd_matrix",
    "topic_map",
    "FeatureTable",
    "build_similarity_from_features",
    "diversity_proxy",
    "load_features",
    "LdaHyperparams",
    "SamplerState",
    "TopicModel",
    "gibbs_sweep",
    "infer_theta",
    "init",
    "top_words",
    "train",
    "ModelArchive",
    "export_model_json",
    "load_model",
    "model_from_json",
    "save_model",
    "Explanation",
    "Recommendation",
    "SimilarityMatrix",
    "UserProfile",
    "build_similarity",
    "explain",
    "likert_to_weight",
    "recommend",
    "score",
    "__version__",
]
