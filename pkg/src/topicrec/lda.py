"""Latent topic model trained by collapsed Gibbs sampling.

Plain collapsed Gibbs, no sparse-sampler tricks: for each token the
sampler removes the token's current assignment from the count matrices,
draws a new topic from the full conditional

    p(k) ~ (n_dk + alpha) * (n_kw + beta) / (n_k + V * beta)

and re-inserts it.  Training is a pure function of (corpus, hyperparams):
the seed plus the per-(sweep, document) stream-splitting rule in
`topicrec.rng` pin every draw.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .corpus import Corpus, Vocabulary
from .errors import ValidationError
from .rng import SplitMix64

DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000


@dataclass(frozen=True)
class LdaHyperparams:
    """Sampler configuration; defaults follow common LDA practice.

    `alpha` defaults to 50/K when not given.  With `average` off the
    estimates come from the final sweep's counts; with it on, smoothed
    estimates are averaged over every post-burn-in sweep.
    """

    K: int
    alpha: float | None = None
    beta: float = DEFAULT_BETA
    iterations: int = DEFAULT_ITERATIONS
    burn_in: int = 0
    seed: int = 0
    average: bool = False

    def __post_init__(self):
        if self.K < 1:
            raise ValidationError(f"K must be >= 1, got {self.K}")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 50.0 / self.K)
        if self.alpha <= 0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha}")
        if self.beta <= 0:
            raise ValidationError(f"beta must be > 0, got {self.beta}")
        if not self.iterations > self.burn_in >= 0:
            raise ValidationError(
                f"need iterations > burn_in >= 0, got "
                f"iterations={self.iterations}, burn_in={self.burn_in}"
            )
        if not 0 <= self.seed <= 0xFFFFFFFFFFFFFFFF:
            raise ValidationError("seed must fit in 64 bits")

    def replace(self, **kwargs) -> "LdaHyperparams":
        current = {
            "K": self.K, "alpha": self.alpha, "beta": self.beta,
            "iterations": self.iterations, "burn_in": self.burn_in,
            "seed": self.seed, "average": self.average,
        }
        current.update(kwargs)
        return LdaHyperparams(**current)


@dataclass
class SamplerState:
    """Topic assignments plus the count matrices that drive the sampler.

    `z` is flat over all token positions; `doc_offsets[d]:doc_offsets[d+1]`
    delimits document d.  `sweeps_done` makes repeated `gibbs_sweep` calls
    consume successive RNG streams.
    """

    z: np.ndarray            # int32, one topic per token position
    doc_offsets: np.ndarray  # int64, length M+1
    tokens: np.ndarray       # int32, flat token ids
    n_dk: np.ndarray         # int32, M x K
    n_kw: np.ndarray         # int32, K x V
    n_k: np.ndarray          # int32, K
    sweeps_done: int = 0

    @property
    def M(self) -> int:
        return self.n_dk.shape[0]

    @property
    def K(self) -> int:
        return self.n_kw.shape[0]

    def z_for_doc(self, d: int) -> np.ndarray:
        return self.z[self.doc_offsets[d]:self.doc_offsets[d + 1]]

    def check_invariants(self) -> None:
        """Raise unless all three count-conservation identities hold."""
        doc_lengths = np.diff(self.doc_offsets)
        if not np.array_equal(self.n_dk.sum(axis=1), doc_lengths):
            raise ValidationError("per-document topic counts do not sum to doc length")
        if not np.array_equal(self.n_kw.sum(axis=1), self.n_k):
            raise ValidationError("per-topic word counts do not sum to topic totals")
        if self.n_k.sum() != len(self.tokens):
            raise ValidationError("topic totals do not sum to total token count")
        if len(self.z) and not (0 <= self.z.min() and self.z.max() < self.K):
            raise ValidationError("topic assignment outside [0, K)")


@dataclass
class TopicModel:
    """Trained model: per-document and per-topic distributions.

    `doc_lengths` is kept alongside `item_ids` so prevalence-style
    statistics can be computed from the model alone.
    """

    hyper: LdaHyperparams
    vocabulary: Vocabulary
    theta: np.ndarray        # float64, M x K, rows sum to 1
    phi: np.ndarray          # float64, K x V, rows sum to 1
    item_ids: tuple[str, ...]
    doc_lengths: np.ndarray  # int64, aligned with item_ids

    @property
    def K(self) -> int:
        return self.phi.shape[0]

    @property
    def M(self) -> int:
        return self.theta.shape[0]

    def check_invariants(self) -> None:
        for name, mat in (("theta", self.theta), ("phi", self.phi)):
            sums = mat.sum(axis=1)
            if not np.all(np.abs(sums - 1.0) <= 1e-9):
                raise ValidationError(f"{name} rows must sum to 1 within 1e-9")
            if not np.all(mat > 0):
                raise ValidationError(f"{name} entries must be strictly positive")
        if len(self.item_ids) != self.M or len(self.doc_lengths) != self.M:
            raise ValidationError("item_ids/doc_lengths misaligned with theta")


def _flatten(corpus: Corpus) -> tuple[np.ndarray, np.ndarray]:
    offsets = np.zeros(corpus.M + 1, dtype=np.int64)
    np.cumsum(corpus.doc_lengths, out=offsets[1:])
    if corpus.total_tokens:
        tokens = np.concatenate([toks for _, toks in corpus.documents]).astype(np.int32)
    else:
        tokens = np.zeros(0, dtype=np.int32)
    return tokens, offsets


def init(corpus: Corpus, hyper: LdaHyperparams) -> SamplerState:
    """Assign every token a uniform random topic and tally the counts.

    Document d draws from RNG stream (seed, 0, d); training sweeps use
    streams 1..iterations, so initialisation never aliases a sweep.
    """
    if corpus.M == 0:
        raise ValidationError("corpus is empty")
    K, V = hyper.K, len(corpus.vocabulary)
    if K > corpus.total_tokens:
        warnings.warn(
            f"K={K} exceeds the corpus token count {corpus.total_tokens}; "
            "most topics will stay empty",
            stacklevel=2,
        )

    tokens, offsets = _flatten(corpus)
    z = np.zeros(len(tokens), dtype=np.int32)
    for d in range(corpus.M):
        rng = SplitMix64(hyper.seed, sweep=0, doc=d)
        for pos in range(offsets[d], offsets[d + 1]):
            z[pos] = rng.randint(K)

    n_dk = np.zeros((corpus.M, K), dtype=np.int32)
    n_kw = np.zeros((K, V), dtype=np.int32)
    n_k = np.zeros(K, dtype=np.int32)
    for d in range(corpus.M):
        lo, hi = offsets[d], offsets[d + 1]
        np.add.at(n_dk[d], z[lo:hi], 1)
    np.add.at(n_kw, (z, tokens), 1)
    np.add.at(n_k, z, 1)

    return SamplerState(
        z=z, doc_offsets=offsets, tokens=tokens,
        n_dk=n_dk, n_kw=n_kw, n_k=n_k, sweeps_done=0,
    )


def gibbs_sweep(
    state: SamplerState, corpus: Corpus, hyper: LdaHyperparams
) -> SamplerState:
    """Resample every token position once, updating `state` in place."""
    _kernels.run_sweeps(
        state.tokens, state.doc_offsets, state.z,
        state.n_dk, state.n_kw, state.n_k,
        hyper.alpha, hyper.beta, hyper.seed,
        state.sweeps_done + 1, 1,
    )
    state.sweeps_done += 1
    return state


def _estimate_theta(state: SamplerState, hyper: LdaHyperparams) -> np.ndarray:
    doc_lengths = np.diff(state.doc_offsets).astype(np.float64)
    return (state.n_dk + hyper.alpha) / (doc_lengths[:, None] + hyper.K * hyper.alpha)


def _estimate_phi(state: SamplerState, hyper: LdaHyperparams) -> np.ndarray:
    V = state.n_kw.shape[1]
    return (state.n_kw + hyper.beta) / (state.n_k[:, None] + V * hyper.beta)


def train(corpus: Corpus, hyper: LdaHyperparams) -> TopicModel:
    """Initialise and run the configured number of sweeps.

    Smoothed point estimates: theta = (n_dk + a) / (len_d + K*a),
    phi = (n_kw + b) / (n_k + V*b), both strictly positive.
    """
    state = init(corpus, hyper)

    if hyper.average:
        theta_acc = np.zeros_like(state.n_dk, dtype=np.float64)
        phi_acc = np.zeros_like(state.n_kw, dtype=np.float64)
        kept = 0
        for _ in range(hyper.iterations):
            gibbs_sweep(state, corpus, hyper)
            if state.sweeps_done > hyper.burn_in:
                theta_acc += _estimate_theta(state, hyper)
                phi_acc += _estimate_phi(state, hyper)
                kept += 1
        theta = theta_acc / kept
        phi = phi_acc / kept
    else:
        _kernels.run_sweeps(
            state.tokens, state.doc_offsets, state.z,
            state.n_dk, state.n_kw, state.n_k,
            hyper.alpha, hyper.beta, hyper.seed, 1, hyper.iterations,
        )
        state.sweeps_done = hyper.iterations
        theta = _estimate_theta(state, hyper)
        phi = _estimate_phi(state, hyper)

    return TopicModel(
        hyper=hyper,
        vocabulary=corpus.vocabulary,
        theta=theta,
        phi=phi,
        item_ids=corpus.item_ids,
        doc_lengths=corpus.doc_lengths,
    )


def top_words(model: TopicModel, k: int, n: int) -> list[tuple[str, float]]:
    """The n most probable terms of topic k, ties broken lexicographically."""
    if not 0 <= k < model.K:
        raise ValidationError(f"topic id {k} out of range [0, {model.K})")
    if n > len(model.vocabulary):
        raise ValidationError(f"n={n} exceeds vocabulary size {len(model.vocabulary)}")
    row = model.phi[k]
    ranked = sorted(zip(model.vocabulary.terms, row), key=lambda tp: (-tp[1], tp[0]))
    return [(term, float(p)) for term, p in ranked[:n]]


def infer_theta(
    model: TopicModel, terms, sweeps: int = 50, seed: int = 0
) -> np.ndarray:
    """Fold a new document in, holding phi fixed.

    `terms` is a sequence of term strings; out-of-vocabulary terms are
    dropped.  Returns the smoothed topic distribution.
    """
    ids = [model.vocabulary.term_to_id[t] for t in terms if t in model.vocabulary]
    if not ids:
        raise ValidationError("no in-vocabulary tokens")
    K = model.K
    alpha = model.hyper.alpha
    phi = model.phi

    counts = [0] * K
    rng = SplitMix64(seed, sweep=0, doc=0)
    z = [rng.randint(K) for _ in ids]
    for k in z:
        counts[k] += 1

    cum = [0.0] * K
    for sweep in range(1, sweeps + 1):
        rng = SplitMix64(seed, sweep=sweep, doc=0)
        for pos, w in enumerate(ids):
            k = z[pos]
            counts[k] -= 1
            acc = 0.0
            for j in range(K):
                acc += (counts[j] + alpha) * phi[j, w]
                cum[j] = acc
            u = rng.random() * acc
            k = 0
            while k < K - 1 and cum[k] <= u:
                k += 1
            z[pos] = k
            counts[k] += 1

    out = (np.array(counts, dtype=np.float64) + alpha) / (len(ids) + K * alpha)
    return out
