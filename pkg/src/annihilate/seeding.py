"""Deterministic seeding: splitmix64 stream and seed derivation.

The trajectory engine draws every random number from a splitmix64 stream.
The same generator is implemented twice on purpose: here in pure Python
(reference engine, replay tooling) and in ``_kernels`` for the jitted hot
loops.  Both must produce identical sequences; ``tests/test_state.py``
locks them together.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


def mix64(x: int) -> int:
    """splitmix64 output function: a 64-bit finalizer/hash."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def derive_trial_seed(base_seed: int, point_index: int, trial_index: int) -> int:
    """Per-trial engine seed: base_seed XOR mix64(point_index, trial_index).

    Stable across versions by construction (no dependence on Python's
    ``hash``).  point_index and trial_index must each fit in 32 bits.
    """
    if not 0 <= point_index < 2**32 or not 0 <= trial_index < 2**32:
        raise ValueError("point/trial index out of 32-bit range")
    return (base_seed ^ mix64((point_index << 32) | trial_index)) & MASK64


class SplitMix64:
    """Minimal splitmix64 stream with the draw primitives the engine uses."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def u01(self) -> float:
        """Uniform float64 in [0, 1)."""
        return (self.next64() >> 11) * _INV_2_53

    def below(self, m: int) -> int:
        """Uniform integer in [0, m).  m == 1 consumes no draw."""
        if m <= 1:
            if m < 1:
                raise ValueError("below() needs m >= 1")
            return 0
        mask = m - 1
        mask |= mask >> 1
        mask |= mask >> 2
        mask |= mask >> 4
        mask |= mask >> 8
        mask |= mask >> 16
        mask |= mask >> 32
        while True:
            v = self.next64() & mask
            if v < m:
                return v

    def shuffle(self, seq) -> None:
        """In-place Fisher-Yates, high index down; draw order is canonical."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
