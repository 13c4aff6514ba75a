"""Portable 64-bit RNG used by every sampling path.

The generator is splitmix64 (Steele, Lea & Flood 2014): a 64-bit counter
advanced by a fixed odd increment, with an avalanching output mix.  It was
chosen because the exact same integer arithmetic is expressible in pure
Python (masked big ints) and in C (native uint64), so the compiled kernel
and the fallback kernel draw bit-identical streams.

Stream splitting rule: every (seed, sweep, doc) triple owns an independent
stream.  Sweep 0 is reserved for initialisation; training sweeps are
1-based.  Documents are indexed by their position in the corpus, which is
canonical (corpora sort documents by item id), so the same logical corpus
always consumes the same streams regardless of input file order.

The Cython kernel in ``_kernels/_gibbs.pyx`` re-implements ``_mix64``,
``stream_state`` and ``next_uint64`` with native uint64 arithmetic; any
change here must be mirrored there or determinism across backends breaks.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF

# splitmix64 increment and output-mix multipliers
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# stream-derivation multipliers (distinct odd constants)
_SWEEP_SALT = 0xD1B54A32D192ED03
_DOC_SALT = 0x8CB92BA72F3D8DD7

# (u64 >> 11) has 53 bits; scaling by 2^-53 yields a double in [0, 1)
_INV_2_53 = 1.0 / 9007199254740992.0


def _mix64(x: int) -> int:
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def stream_state(seed: int, sweep: int, doc: int) -> int:
    """Initial splitmix64 state for document `doc` during sweep `sweep`."""
    s = _mix64(seed)
    s = _mix64(s ^ ((sweep * _SWEEP_SALT) & MASK64))
    s = _mix64(s ^ ((doc * _DOC_SALT) & MASK64))
    return s


def next_uint64(state: int) -> tuple[int, int]:
    """Advance the stream one step; returns (new_state, output)."""
    state = (state + _GAMMA) & MASK64
    return state, _mix64(state)


def uint_below(value: int, bound: int) -> int:
    """Map a 64-bit draw onto [0, bound) by modulo.

    The modulo bias is < bound/2^64, irrelevant for topic counts.
    """
    return value % bound


def to_unit_double(value: int) -> float:
    """Map a 64-bit draw onto a double in [0, 1), using the top 53 bits."""
    return (value >> 11) * _INV_2_53


class SplitMix64:
    """Stateful convenience wrapper over the stream functions."""

    __slots__ = ("_state",)

    def __init__(self, seed: int, sweep: int = 0, doc: int = 0):
        self._state = stream_state(seed, sweep, doc)

    def next_uint64(self) -> int:
        self._state, out = next_uint64(self._state)
        return out

    def randint(self, bound: int) -> int:
        return uint_below(self.next_uint64(), bound)

    def random(self) -> float:
        return to_unit_double(self.next_uint64())
