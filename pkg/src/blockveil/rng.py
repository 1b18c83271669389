"""Deterministic keyed randomness for key schedules.

All ciphertext determinism flows through this module: a splitmix64 stream
(https://rosettacode.org/wiki/Pseudo-random_numbers/Splitmix64) plus a
Fisher-Yates shuffle with modulo-bounded draws. Draw order is part of the
key-file contract, so nothing here may change without versioning the format.
Modulo bias is negligible at the sequence lengths used (at most a few
hundred elements against a 64-bit draw) and is accepted for bit-exact
cross-platform reproducibility.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 stream; one 64-bit output per step, pure function of the seed."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_below(self, bound: int) -> int:
        """Draw in [0, bound) by modulo reduction."""
        return self.next_u64() % bound

    def bytes(self, n: int) -> bytes:
        """n keystream bytes; each draw contributes 8 little-endian bytes."""
        draws = (n + 7) // 8
        buf = b"".join(self.next_u64().to_bytes(8, "little") for _ in range(draws))
        return buf[:n]


def fisher_yates(rng: SplitMix64, n: int) -> np.ndarray:
    """Keyed permutation of 0..n-1: swap from the top down, j = draw mod (i+1)."""
    perm = np.arange(n, dtype=np.int64)
    for i in range(n - 1, 0, -1):
        j = rng.next_below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def invert_permutation(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm), dtype=perm.dtype)
    return inv
