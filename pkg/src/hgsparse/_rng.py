"""Deterministic 64-bit random stream used by every sampling routine.

The generator is xorshift64 (shifts 13/7/17) seeded through a splitmix64
scramble, with bounded draws done by mask-and-reject so each value below
the bound is equally likely.  The compiled kernels implement the exact
same update over ``uint64`` scalars, so a stream state can cross the
numba boundary in either direction and stay reproducible.  This module
is the pure ``int`` reference implementation.

Stream-consumption rules (shared with the kernels, relied on by the
equivalence tests):

* ``randbelow(1)`` and ``randbelow(0)`` return 0 without advancing.
* A shuffle of ``count`` positions consumes exactly ``count`` bounded
  draws, one per position, even when a draw happens to be a self-swap.
* Sampling everything from a pool (``count >= len(pool)``) consumes
  nothing.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(value: int) -> int:
    """One splitmix64 step: advance by the golden gamma and finalize."""
    value = (value + _SPLITMIX_GAMMA) & _MASK64
    value ^= value >> 30
    value = (value * 0xBF58476D1CE4E5B9) & _MASK64
    value ^= value >> 27
    value = (value * 0x94D049BB133111EB) & _MASK64
    value ^= value >> 31
    return value


def mix_seed(seed: int) -> int:
    """Map a user seed to a nonzero xorshift64 state."""
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    state = splitmix64(seed)
    # xorshift64 has a single fixed point at zero; steer away from it.
    return state if state != 0 else _SPLITMIX_GAMMA


def substream_seed(seed: int, tag: int) -> int:
    """Derive an independent seed for a labelled substream of ``seed``."""
    return splitmix64(splitmix64(seed & _MASK64) ^ (tag & _MASK64))


def state_buffer(seed: int) -> np.ndarray:
    """Seeded stream state in the one-element uint64 form the kernels take."""
    return np.array([mix_seed(seed)], dtype=np.uint64)


def _next(state: int) -> int:
    state ^= (state << 13) & _MASK64
    state ^= state >> 7
    state ^= (state << 17) & _MASK64
    return state


class RandomStream:
    """Tiny stateful wrapper over the xorshift64 stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int = 0):
        self._state = mix_seed(seed)

    @property
    def state(self) -> int:
        return self._state

    def randbelow(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``; 0 consumes no state when bound <= 1."""
        if bound <= 1:
            return 0
        mask = bound - 1
        mask |= mask >> 1
        mask |= mask >> 2
        mask |= mask >> 4
        mask |= mask >> 8
        mask |= mask >> 16
        mask |= mask >> 32
        state = self._state
        while True:
            state = _next(state)
            draw = state & mask
            if draw < bound:
                self._state = state
                return draw

    def shuffle_prefix(self, items: list, count: int) -> None:
        """Fisher-Yates the first ``count`` slots of ``items`` in place."""
        n = len(items)
        if count > n:
            raise ValueError(f"cannot shuffle {count} slots of a {n}-item list")
        for i in range(count):
            j = i + self.randbelow(n - i)
            items[i], items[j] = items[j], items[i]
