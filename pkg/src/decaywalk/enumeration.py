"""Brute-force path enumeration: the exact-law oracle.

``enumerate_paths`` applies the chain rule with the conditional step law to
every one of the 2^n sign sequences.  ``enumerate_resampling_paths`` instead
enumerates every realization of the literal mechanism's randomness (uniform
history index times copy/flip decision at each step) and accumulates the
probability of each sign sequence.  Agreement of the two distributions is the
law-equivalence test for the O(1) simulator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ModelParams
from .walk import WalkState, plus_probability

ENUMERATION_CAP = 20


class HorizonTooLargeError(ValueError):
    """2^n enumeration refused beyond the configured cap."""


@dataclass(frozen=True)
class PathDistribution:
    """Exact joint law of the first n signs.

    signs: (2^n, n) matrix of +-1, row i being the bits of i (MSB first).
    prob:  probability of each row; sums to 1.
    gamma: decay exponent used for the S functionals.
    """

    n: int
    gamma: float
    signs: np.ndarray
    prob: np.ndarray

    @property
    def t_values(self) -> np.ndarray:
        return self.signs.sum(axis=1)

    @property
    def s_values(self) -> np.ndarray:
        return self.signs @ self.step_sizes

    @property
    def step_sizes(self) -> np.ndarray:
        return np.arange(1, self.n + 1, dtype=np.float64) ** (-self.gamma)

    def entries(self):
        """Iterate (sign tuple, probability, T_n, S_n) over all paths."""
        t = self.t_values
        s = self.s_values
        for i in range(self.signs.shape[0]):
            yield tuple(int(v) for v in self.signs[i]), float(self.prob[i]), int(t[i]), float(s[i])

    def expectation(self, per_path: np.ndarray) -> float:
        """E[f] for a per-path functional given as a length-2^n vector."""
        return float(self.prob @ per_path)

    def moment_profile(self) -> dict[str, np.ndarray]:
        """Exact E[T_k], E[T_k^2], E[S_k], E[S_k^2] for every k = 1..n.

        Index 0 of each returned array corresponds to k = 1.
        """
        t_paths = np.cumsum(self.signs, axis=1).astype(np.float64)
        s_paths = np.cumsum(self.signs * self.step_sizes, axis=1)
        return {
            "mean_T": self.prob @ t_paths,
            "m2_T": self.prob @ (t_paths**2),
            "mean_S": self.prob @ s_paths,
            "m2_S": self.prob @ (s_paths**2),
        }


def _sign_matrix(n: int) -> np.ndarray:
    idx = np.arange(2**n, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    return (2 * bits - 1).astype(np.int8)


def enumerate_paths(params: ModelParams, n: int, cap: int = ENUMERATION_CAP) -> PathDistribution:
    """Exact joint law of (X_1..X_n) via the chain rule over all 2^n paths."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise HorizonTooLargeError(f"n={n} exceeds enumeration cap {cap}")
    signs = _sign_matrix(n)
    up = (signs == 1)
    prob = np.where(up[:, 0], params.q, 1.0 - params.q)
    h = np.cumsum(up, axis=1, dtype=np.float64)
    half = 0.5 * (1.0 - params.alpha)
    for j in range(1, n):
        pp = params.alpha * h[:, j - 1] / j + half
        prob = prob * np.where(up[:, j], pp, 1.0 - pp)
    return PathDistribution(n=n, gamma=params.gamma, signs=signs, prob=prob)


def enumerate_resampling_paths(
    params: ModelParams, n: int, cap: int = 12
) -> PathDistribution:
    """Exact joint law of the literal mechanism, enumerating its randomness.

    Branches over the first sign, then over every (history index, copy/flip)
    pair at each later step: 2^n * (n-1)! outcomes in total, so keep n small.
    Rows are aligned with :func:`enumerate_paths` for entrywise comparison.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise HorizonTooLargeError(f"n={n} exceeds resampling enumeration cap {cap}")
    p, q = params.p, params.q
    acc = np.zeros(2**n, dtype=np.float64)
    signs = np.empty(n, dtype=np.int64)

    def row_index() -> int:
        idx = 0
        for x in signs:
            idx = (idx << 1) | (1 if x == 1 else 0)
        return idx

    def recurse(k: int, weight: float):
        # k steps already fixed in signs[:k]
        if weight == 0.0:
            return
        if k == n:
            acc[row_index()] += weight
            return
        if k == 0:
            for x, w in ((1, q), (-1, 1.0 - q)):
                signs[0] = x
                recurse(1, weight * w)
            return
        for j in range(k):  # uniform history index
            remembered = signs[j]
            for x, w in ((remembered, p), (-remembered, 1.0 - p)):
                signs[k] = x
                recurse(k + 1, weight * w / k)

    recurse(0, 1.0)
    return PathDistribution(
        n=n, gamma=params.gamma, signs=_sign_matrix(n), prob=acc
    )
