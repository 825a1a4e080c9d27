"""Reproducible per-trial random streams.

Each Monte Carlo trial gets its own xoshiro256** stream whose state is
derived from (master_seed, trial_index) by a splitmix64 chain, so streams
are a pure function of the pair: trials can be simulated in any order, on
any number of threads, and always see the same variates.

This module is the pure-Python reference; the numba kernels inline the same
update bit for bit, and the test suite asserts cross-implementation equality.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_M1 = 0xBF58476D1CE4E5B9
_SM_M2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (next state, 64-bit output)."""
    state = (state + _SM_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _SM_M1) & MASK64
    z = ((z ^ (z >> 27)) * _SM_M2) & MASK64
    z ^= z >> 31
    return state, z


def stream_state(master_seed: int, trial_index: int) -> tuple[int, int, int, int]:
    """Derive the 256-bit xoshiro state for one trial."""
    s = (master_seed + _SM_GAMMA * (trial_index + 1)) & MASK64
    s, s0 = splitmix64(s)
    s, s1 = splitmix64(s)
    s, s2 = splitmix64(s)
    s, s3 = splitmix64(s)
    return s0, s1, s2, s3


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class TrialStream:
    """xoshiro256** stream for trial ``trial_index`` under ``master_seed``.

    Duck-types numpy's Generator.random() for scalar draws.
    """

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, master_seed: int, trial_index: int = 0):
        if not (0 <= master_seed <= MASK64):
            raise ValueError("master_seed must fit in 64 bits")
        if trial_index < 0:
            raise ValueError("trial_index must be >= 0")
        self.s0, self.s1, self.s2, self.s3 = stream_state(master_seed, trial_index)

    def next_uint64(self) -> int:
        result = (_rotl((self.s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (self.s1 << 17) & MASK64
        self.s2 ^= self.s0
        self.s3 ^= self.s1
        self.s1 ^= self.s2
        self.s0 ^= self.s3
        self.s2 ^= t
        self.s3 = _rotl(self.s3, 45)
        return result

    def random(self) -> float:
        """Uniform variate in [0, 1) with 53 random mantissa bits."""
        return (self.next_uint64() >> 11) * _INV53
