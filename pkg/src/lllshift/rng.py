"""SplitMix64 pseudo-random number generator.

This is the package's single source of randomness for solving. The
algorithm is pinned so that resampling trajectories are reproducible
bit-for-bit from a 64-bit seed, across runs and across the two solver
lanes (the compiled kernel carries an identical C implementation).

SplitMix64 (Steele, Lea, Flood; as shipped in Java 8's SplittableRandom):

    state := (state + 0x9E3779B97F4A7C15) mod 2^64
    z := state
    z := ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z := ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output z XOR (z >> 31)

Bounded draws use bitmask rejection, which is exactly uniform: mask the
output down to the lowest ceil(log2(k)) bits and redraw while the value
is >= k. Every call consumes at least one 64-bit draw, including k = 1.
"""
from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        """Uniform integer in [0, k) via bitmask rejection."""
        if k < 1:
            raise ValueError("k must be >= 1")
        mask = (1 << (k - 1).bit_length()) - 1
        while True:
            v = self.next64() & mask
            if v < k:
                return v
