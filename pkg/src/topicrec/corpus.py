"""Item ingestion, document enrichment and the text-preprocessing pipeline.

Raw item records become enriched description documents, which are cleaned,
tokenized and indexed into an immutable corpus.  Everything in this module
is deterministic for a fixed (items, enrich flag, config) triple:
vocabularies are sorted lexicographically and documents are sorted by
item id, so the same logical input always produces byte-identical output.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, ValidationError
from .stemmer import stem

FORMATS = ("landscape", "portrait")
SIZE_CLASSES = ("small", "medium", "large")

_REQUIRED_FIELDS = (
    "item_id",
    "artist_name",
    "painting_title",
    "painting_description",
    "publishing_date",
    "format",
    "size_class",
    "technique",
)


@dataclass(frozen=True)
class ItemRecord:
    """One collection item with its catalogue attributes."""

    item_id: str
    artist_name: str
    painting_title: str
    painting_description: str
    publishing_date: str
    format: str
    size_class: str
    technique: str
    extra_texts: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.item_id.strip():
            raise ValidationError("item_id must be non-empty")
        if not self.painting_description.strip():
            raise ValidationError(
                f"item {self.item_id!r}: painting_description must be non-empty"
            )
        if self.format not in FORMATS:
            raise ValidationError(
                f"item {self.item_id!r}: format must be one of {FORMATS}, "
                f"got {self.format!r}"
            )
        if self.size_class not in SIZE_CLASSES:
            raise ValidationError(
                f"item {self.item_id!r}: size_class must be one of "
                f"{SIZE_CLASSES}, got {self.size_class!r}"
            )


def default_stopwords() -> frozenset[str]:
    """The bundled English stop-word list (pinned for reproducibility)."""
    text = resources.files("topicrec.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Load a stop-word file: one token per line, UTF-8."""
    with open(path, encoding="utf-8") as f:
        return frozenset(line.strip() for line in f if line.strip())


@dataclass(frozen=True)
class PreprocessConfig:
    """Knobs for the cleaning pipeline; defaults are the pinned baseline."""

    stop_words: frozenset[str] = field(default_factory=default_stopwords)
    min_token_len: int = 3
    stemming: bool = True
    detect_bigrams: bool = True
    bigram_min_count: int = 5
    bigram_threshold: float = 10.0

    def __post_init__(self):
        if self.min_token_len < 1:
            raise ValidationError("min_token_len must be >= 1")
        if self.bigram_min_count < 1:
            raise ValidationError("bigram_min_count must be >= 1")
        if self.bigram_threshold <= 0:
            raise ValidationError("bigram_threshold must be > 0")


class Vocabulary:
    """Bijection between term strings and ids [0, V)."""

    __slots__ = ("terms", "term_to_id")

    def __init__(self, terms: Sequence[str]):
        self.terms = tuple(terms)
        self.term_to_id = {t: i for i, t in enumerate(self.terms)}
        if len(self.term_to_id) != len(self.terms):
            raise ValidationError("vocabulary terms must be distinct")

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.term_to_id

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self.terms == other.terms

    def id_of(self, term: str) -> int:
        return self.term_to_id[term]


@dataclass(frozen=True)
class Corpus:
    """Tokenized documents over a fixed vocabulary, sorted by item id."""

    vocabulary: Vocabulary
    documents: tuple[tuple[str, np.ndarray], ...]  # (item_id, int32 token ids)
    M: int
    total_tokens: int

    @property
    def item_ids(self) -> tuple[str, ...]:
        return tuple(item_id for item_id, _ in self.documents)

    @property
    def doc_lengths(self) -> np.ndarray:
        return np.array([len(toks) for _, toks in self.documents], dtype=np.int64)

    def to_bytes(self) -> bytes:
        """Canonical serialization, used for determinism checks."""
        payload = {
            "terms": list(self.vocabulary.terms),
            "documents": [[item_id, toks.tolist()] for item_id, toks in self.documents],
        }
        return json.dumps(payload, separators=(",", ":"), sort_keys=True).encode("utf-8")


# ---------------------------------------------------------------------------
# ingestion


def _record_from_mapping(row: dict, where: str) -> ItemRecord:
    missing = [f for f in _REQUIRED_FIELDS if f not in row or row[f] is None]
    if missing:
        raise ParseError(f"{where}: missing fields {missing}")
    extras = row.get("extra_texts", ())
    if isinstance(extras, str):
        raise ParseError(f"{where}: extra_texts must be a list of strings")
    try:
        return ItemRecord(
            item_id=str(row["item_id"]).strip(),
            artist_name=str(row["artist_name"]).strip(),
            painting_title=str(row["painting_title"]).strip(),
            painting_description=str(row["painting_description"]).strip(),
            publishing_date=str(row["publishing_date"]).strip(),
            format=str(row["format"]).strip().lower(),
            size_class=str(row["size_class"]).strip().lower(),
            technique=str(row["technique"]).strip(),
            extra_texts=tuple(str(t) for t in (extras or ())),
        )
    except ValidationError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def load_items(path: str | Path, format: str = "jsonl") -> list[ItemRecord]:
    """Load item records from a JSONL or CSV file, in file order.

    JSONL carries one object per line with `extra_texts` as a JSON array;
    CSV has a header row matching the record field names with `extra_texts`
    as a `|`-separated cell.  Duplicate item ids are rejected.
    """
    path = Path(path)
    if format == "jsonl":
        records = _load_jsonl(path)
    elif format == "csv":
        records = _load_csv(path)
    else:
        raise ValueError(f"unknown format {format!r}, expected 'jsonl' or 'csv'")

    seen: set[str] = set()
    for rec in records:
        if rec.item_id in seen:
            raise ValidationError(f"duplicate item_id {rec.item_id!r}")
        seen.add(rec.item_id)
    return records


def _load_jsonl(path: Path) -> list[ItemRecord]:
    records = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if not isinstance(row, dict):
                raise ParseError(f"{path}:{lineno}: expected a JSON object")
            records.append(_record_from_mapping(row, f"{path}:{lineno}"))
    return records


def _load_csv(path: Path) -> list[ItemRecord]:
    records = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise ParseError(f"{path}: empty CSV file")
        for lineno, row in enumerate(reader, start=2):  # header is row 1
            if None in row:
                raise ParseError(f"{path}:{lineno}: too many columns")
            extras_cell = (row.pop("extra_texts", "") or "").strip()
            mapping: dict = dict(row)
            mapping["extra_texts"] = (
                [t for t in extras_cell.split("|") if t] if extras_cell else []
            )
            records.append(_record_from_mapping(mapping, f"{path}:{lineno}"))
    return records


# ---------------------------------------------------------------------------
# document building and cleaning


def build_document(item: ItemRecord, enrich: bool) -> str:
    """Raw text for one item: the description alone, or the enriched form.

    Enrichment appends the keyword attributes and any extra texts in a
    fixed order so the result is byte-deterministic.
    """
    if not enrich:
        return item.painting_description
    parts = [
        item.painting_description,
        item.artist_name,
        item.painting_title,
        item.technique,
        item.publishing_date,
        item.format,
        item.size_class,
        *item.extra_texts,
    ]
    return " ".join(parts)


def _clean_tokens(raw: str, config: PreprocessConfig) -> list[str]:
    """Pipeline stages up to (and including) stemming.

    Order is fixed: lowercase, strip non-letter characters, whitespace
    tokenize, drop short tokens, drop stop words, stem.  Stemming can
    shorten a token below the length floor or collapse it onto a stop
    word, so both filters are re-applied afterwards to keep the
    vocabulary invariants airtight.
    """
    lowered = raw.lower()
    chars = [c if c.isalpha() or c.isspace() else " " for c in lowered]
    tokens = "".join(chars).split()
    tokens = [t for t in tokens if len(t) >= config.min_token_len]
    tokens = [t for t in tokens if t not in config.stop_words]
    if config.stemming:
        tokens = [stem(t) for t in tokens]
        tokens = [
            t
            for t in tokens
            if len(t) >= config.min_token_len and t not in config.stop_words
        ]
    return tokens


def detect_bigrams(
    token_docs: Iterable[Sequence[str]],
    min_count: int,
    threshold: float,
) -> set[tuple[str, str]]:
    """Find adjacent pairs worth merging, scored over the whole corpus.

    A pair (a, b) qualifies when it occurs at least `min_count` times and
    count(ab) * N / (count(a) * count(b)) >= threshold, with N the total
    token count.
    """
    unigrams: dict[str, int] = {}
    pairs: dict[tuple[str, str], int] = {}
    total = 0
    for tokens in token_docs:
        total += len(tokens)
        for t in tokens:
            unigrams[t] = unigrams.get(t, 0) + 1
        for a, b in zip(tokens, tokens[1:]):
            pairs[(a, b)] = pairs.get((a, b), 0) + 1

    selected = set()
    for (a, b), n_ab in pairs.items():
        if n_ab < min_count:
            continue
        score = n_ab * total / (unigrams[a] * unigrams[b])
        if score >= threshold:
            selected.add((a, b))
    return selected


def merge_bigrams(
    tokens: Sequence[str], pairs: set[tuple[str, str]]
) -> list[str]:
    """Single left-to-right pass joining selected pairs with underscores."""
    out = []
    i = 0
    n = len(tokens)
    while i < n:
        if i + 1 < n and (tokens[i], tokens[i + 1]) in pairs:
            out.append(tokens[i] + "_" + tokens[i + 1])
            i += 2
        else:
            out.append(tokens[i])
            i += 1
    return out


def preprocess(raw: str, config: PreprocessConfig) -> list[str]:
    """Run the full cleaning pipeline on one text.

    Bigram statistics are computed from this text alone; `build_corpus`
    pools them over the whole collection instead.
    """
    tokens = _clean_tokens(raw, config)
    if config.detect_bigrams:
        pairs = detect_bigrams([tokens], config.bigram_min_count, config.bigram_threshold)
        tokens = merge_bigrams(tokens, pairs)
    return tokens


def build_corpus(
    items: Sequence[ItemRecord],
    enrich: bool,
    config: PreprocessConfig,
) -> Corpus:
    """Tokenize every item and index the result into a corpus.

    Items whose document ends up empty after cleaning are rejected (not
    dropped) so downstream matrices can never silently misalign.
    """
    if not items:
        raise ValidationError("cannot build a corpus from zero items")

    ordered = sorted(items, key=lambda it: it.item_id)
    token_docs = [_clean_tokens(build_document(it, enrich), config) for it in ordered]

    if config.detect_bigrams:
        pairs = detect_bigrams(token_docs, config.bigram_min_count, config.bigram_threshold)
        token_docs = [merge_bigrams(toks, pairs) for toks in token_docs]

    empty = [it.item_id for it, toks in zip(ordered, token_docs) if not toks]
    if empty:
        raise ValidationError(
            f"items with empty documents after preprocessing: {empty}"
        )

    vocab = Vocabulary(sorted({t for toks in token_docs for t in toks}))
    documents = tuple(
        (
            it.item_id,
            np.array([vocab.id_of(t) for t in toks], dtype=np.int32),
        )
        for it, toks in zip(ordered, token_docs)
    )
    total = sum(len(toks) for _, toks in documents)
    return Corpus(
        vocabulary=vocab,
        documents=documents,
        M=len(documents),
        total_tokens=total,
    )


# ---------------------------------------------------------------------------
# config files


def load_preprocess_config(path: str | Path) -> PreprocessConfig:
    """Read a PreprocessConfig from a JSON or (flat) TOML file.

    Recognized keys: stopwords_file, min_token_len, stemming,
    detect_bigrams, bigram_min_count, bigram_threshold.
    """
    path = Path(path)
    if path.suffix == ".json":
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    elif path.suffix == ".toml":
        data = _parse_flat_toml(path)
    else:
        raise ValueError(f"config file must be .json or .toml, got {path.name!r}")

    kwargs: dict = {}
    if "stopwords_file" in data:
        kwargs["stop_words"] = load_stopwords(data.pop("stopwords_file"))
    known = {
        "min_token_len",
        "stemming",
        "detect_bigrams",
        "bigram_min_count",
        "bigram_threshold",
    }
    unknown = set(data) - known
    if unknown:
        raise ParseError(f"{path}: unknown config keys {sorted(unknown)}")
    kwargs.update(data)
    return PreprocessConfig(**kwargs)


def config_to_dict(config: PreprocessConfig) -> dict:
    """JSON-ready form of a config, stop list inlined for portability."""
    return {
        "stop_words": sorted(config.stop_words),
        "min_token_len": config.min_token_len,
        "stemming": config.stemming,
        "detect_bigrams": config.detect_bigrams,
        "bigram_min_count": config.bigram_min_count,
        "bigram_threshold": config.bigram_threshold,
    }


def config_from_dict(data: dict) -> PreprocessConfig:
    return PreprocessConfig(
        stop_words=frozenset(data["stop_words"]),
        min_token_len=int(data["min_token_len"]),
        stemming=bool(data["stemming"]),
        detect_bigrams=bool(data["detect_bigrams"]),
        bigram_min_count=int(data["bigram_min_count"]),
        bigram_threshold=float(data["bigram_threshold"]),
    )


def _parse_flat_toml(path: Path) -> dict:
    """Minimal reader for flat `key = value` TOML (no tables, no arrays).

    The standard library gains tomllib only in 3.11; this covers the
    scalar subset the config surface actually uses.
    """
    data: dict = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise ParseError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = text.partition("=")
            key = key.strip()
            value = value.split("#", 1)[0].strip()
            if value.startswith('"') and value.endswith('"') and len(value) >= 2:
                data[key] = value[1:-1]
            elif value in ("true", "false"):
                data[key] = value == "true"
            else:
                try:
                    data[key] = int(value)
                except ValueError:
                    try:
                        data[key] = float(value)
                    except ValueError as exc:
                        raise ParseError(
                            f"{path}:{lineno}: cannot parse value {value!r}"
                        ) from exc
    return data
