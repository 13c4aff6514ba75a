# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Gibbs-sweep kernel.

Mirror of `_gibbs_py.run_sweeps`: identical splitmix64 streams and the
same double-precision operation order, so both kernels produce
bit-identical topic assignments.  Compile with -ffp-contract=off; fused
multiply-adds would change the rounding and break that equivalence.
"""

from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64

cdef u64 GAMMA = 0x9E3779B97F4A7C15ULL
cdef u64 MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 MIX2 = 0x94D049BB133111EBULL
cdef u64 SWEEP_SALT = 0xD1B54A32D192ED03ULL
cdef u64 DOC_SALT = 0x8CB92BA72F3D8DD7ULL

# (u64 >> 11) has 53 bits; scaling by 2^-53 yields a double in [0, 1)
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline u64 mix64(u64 x) noexcept nogil:
    x = (x ^ (x >> 30)) * MIX1
    x = (x ^ (x >> 27)) * MIX2
    return x ^ (x >> 31)


cdef inline u64 stream_state(u64 seed, u64 sweep, u64 doc) noexcept nogil:
    cdef u64 s = mix64(seed)
    s = mix64(s ^ (sweep * SWEEP_SALT))
    s = mix64(s ^ (doc * DOC_SALT))
    return s


def run_sweeps(
    int[::1] tokens,
    long long[::1] doc_offsets,
    int[::1] z,
    int[:, ::1] n_dk,
    int[:, ::1] n_kw,
    int[::1] n_k,
    double alpha,
    double beta,
    u64 seed,
    long long first_sweep,
    long long n_sweeps,
):
    """Run `n_sweeps` collapsed-Gibbs sweeps in place; see `_gibbs_py`."""
    cdef Py_ssize_t M = n_dk.shape[0]
    cdef Py_ssize_t K = n_kw.shape[0]
    cdef Py_ssize_t V = n_kw.shape[1]
    cdef double vbeta = V * beta

    cdef double *cum = <double *> malloc(K * sizeof(double))
    if cum == NULL:
        raise MemoryError()

    cdef long long sweep
    cdef Py_ssize_t d, pos, j
    cdef int w, k
    cdef u64 state
    cdef double acc, u

    with nogil:
        for sweep in range(first_sweep, first_sweep + n_sweeps):
            for d in range(M):
                state = stream_state(seed, <u64> sweep, <u64> d)
                for pos in range(doc_offsets[d], doc_offsets[d + 1]):
                    w = tokens[pos]
                    k = z[pos]
                    n_dk[d, k] -= 1
                    n_kw[k, w] -= 1
                    n_k[k] -= 1

                    acc = 0.0
                    for j in range(K):
                        acc += (n_dk[d, j] + alpha) * (n_kw[j, w] + beta) / (n_k[j] + vbeta)
                        cum[j] = acc

                    state = state + GAMMA
                    u = <double> (mix64(state) >> 11) * INV_2_53 * acc
                    k = 0
                    while k < K - 1 and cum[k] <= u:
                        k += 1

                    z[pos] = k
                    n_dk[d, k] += 1
                    n_kw[k, w] += 1
                    n_k[k] += 1

    free(cum)
