"""Compare the compiled Gibbs kernel against the pure-Python fallback.

Both kernels must produce bit-identical chains, so this is purely a
throughput comparison on a synthetic corpus.  Run:

    python benchmarks/bench_gibbs.py [--docs 200] [--len 120] [--vocab 800]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from topicrec._kernels import available_backends
from topicrec.corpus import Corpus, Vocabulary
from topicrec.lda import LdaHyperparams, init
from topicrec.rng import SplitMix64


def synthetic_corpus(n_docs: int, doc_len: int, vocab_size: int) -> Corpus:
    rng = SplitMix64(1234)
    terms = [f"w{i:05d}" for i in range(vocab_size)]
    docs = tuple(
        (
            f"D{d:05d}",
            np.array(
                [rng.randint(vocab_size) for _ in range(doc_len)], dtype=np.int32
            ),
        )
        for d in range(n_docs)
    )
    return Corpus(
        vocabulary=Vocabulary(terms),
        documents=docs,
        M=n_docs,
        total_tokens=n_docs * doc_len,
    )


def bench(kernel, corpus: Corpus, hyper: LdaHyperparams, sweeps: int) -> tuple[float, np.ndarray]:
    state = init(corpus, hyper)
    t0 = time.perf_counter()
    kernel(
        state.tokens, state.doc_offsets, state.z,
        state.n_dk, state.n_kw, state.n_k,
        hyper.alpha, hyper.beta, hyper.seed, 1, sweeps,
    )
    return time.perf_counter() - t0, state.z.copy()


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=200)
    parser.add_argument("--len", dest="doc_len", type=int, default=120)
    parser.add_argument("--vocab", type=int, default=800)
    parser.add_argument("--topics", type=int, default=20)
    parser.add_argument("--sweeps", type=int, default=20)
    args = parser.parse_args()

    corpus = synthetic_corpus(args.docs, args.doc_len, args.vocab)
    hyper = LdaHyperparams(K=args.topics, iterations=args.sweeps, seed=99)
    tokens = corpus.total_tokens
    print(
        f"corpus: {corpus.M} docs x {args.doc_len} tokens, "
        f"V={args.vocab}, K={args.topics}, {args.sweeps} sweeps"
    )

    results = {}
    for name, kernel in sorted(available_backends().items()):
        elapsed, z = bench(kernel, corpus, hyper, args.sweeps)
        rate = tokens * args.sweeps / elapsed / 1e6
        results[name] = (elapsed, z)
        print(f"{name:>8}: {elapsed:8.3f} s  ({rate:6.2f} M token-updates/s)")

    if len(results) == 2:
        z_py, z_cy = results["python"][1], results["cython"][1]
        match = "bit-identical" if np.array_equal(z_py, z_cy) else "DIVERGED"
        speedup = results["python"][0] / results["cython"][0]
        print(f"chains {match}; cython speedup {speedup:.1f}x")


if __name__ == "__main__":
    main()
