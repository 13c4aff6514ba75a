"""Pure-Python Gibbs-sweep kernel.

Bit-for-bit equivalent to the compiled kernel in `_gibbs.pyx`: the same
splitmix64 streams, the same IEEE-754 double operations in the same order.
The hot loop runs over plain Python lists (faster here than per-token
numpy indexing) and results are written back into the caller's arrays.
"""

from __future__ import annotations

import numpy as np

from ..rng import MASK64, _GAMMA, _mix64, stream_state, to_unit_double


def run_sweeps(
    tokens: np.ndarray,
    doc_offsets: np.ndarray,
    z: np.ndarray,
    n_dk: np.ndarray,
    n_kw: np.ndarray,
    n_k: np.ndarray,
    alpha: float,
    beta: float,
    seed: int,
    first_sweep: int,
    n_sweeps: int,
) -> None:
    """Run `n_sweeps` collapsed-Gibbs sweeps in place.

    For every token position: decrement its counts, draw a new topic with
    probability proportional to (n_dk + alpha) * (n_kw + beta) / (n_k +
    V*beta), re-increment.  Sweep `s`, document `d` consumes the RNG
    stream (seed, s, d).
    """
    M = n_dk.shape[0]
    K, V = n_kw.shape
    vbeta = V * beta

    toks = tokens.tolist()
    offs = doc_offsets.tolist()
    zz = z.tolist()
    ndk = n_dk.tolist()
    nkw = n_kw.tolist()
    nk = n_k.tolist()
    cum = [0.0] * K

    for sweep in range(first_sweep, first_sweep + n_sweeps):
        for d in range(M):
            state = stream_state(seed, sweep, d)
            row = ndk[d]
            for pos in range(offs[d], offs[d + 1]):
                w = toks[pos]
                k = zz[pos]
                row[k] -= 1
                nkw[k][w] -= 1
                nk[k] -= 1

                acc = 0.0
                for j in range(K):
                    acc += (row[j] + alpha) * (nkw[j][w] + beta) / (nk[j] + vbeta)
                    cum[j] = acc

                state = (state + _GAMMA) & MASK64
                u = to_unit_double(_mix64(state)) * acc
                k = 0
                while k < K - 1 and cum[k] <= u:
                    k += 1

                zz[pos] = k
                row[k] += 1
                nkw[k][w] += 1
                nk[k] += 1

    z[:] = zz
    n_dk[:] = ndk
    n_kw[:] = nkw
    n_k[:] = nk
