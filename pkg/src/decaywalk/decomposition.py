"""Pathwise Doob decomposition S_n = M_n + A_n and its diagnostics.

The martingale increments are ``d_k = (X_k - e_k) / k^gamma`` with
``e_k = E[X_k | history] = alpha T_{k-1}/(k-1)`` (``e_1 = beta``); the drift
is ``A_n = sum_k e_k / k^gamma = beta + alpha sum_{k<n} T_k/(k (k+1)^gamma)``.

Two path functionals tie the decomposition back to the walk itself:

* the remainder ``R_n = A_n - (alpha/gamma)(S_n - T_n/n^gamma)``, which is
  almost surely bounded by ``|beta| + (3 + sigma_1)|alpha|`` where
  ``sigma_1 = sum_k k^(-gamma-1)``; a violation signals an implementation
  bug, not randomness, so it raises.
* the residual ``(1 - alpha/gamma) S_n - (M_n - alpha T_n/(gamma n^gamma))``,
  algebraically identical to R_n; the two are computed through different
  accumulators and their agreement is a live numerical check.

The quadratic-variation family (expected s^2, predictable V^2, realized U^2)
is tracked alongside.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .params import ModelParams
from .walk import WalkState, conditional_step_mean


class BoundViolationError(AssertionError):
    """The deterministic remainder bound failed: the decomposition is wrong."""


@dataclass(frozen=True)
class DecompState:
    """Decomposition ledger after n steps."""

    n: int
    S: float
    M: float
    A: float
    V2: float
    U2: float
    R: float
    resid22: float


@dataclass(frozen=True)
class VariationTriple:
    """Expected, predictable, and realized quadratic variation at step n."""

    n: int
    s2: float
    V2: float
    U2: float


def decompose_step(state: WalkState, x: int, params: ModelParams) -> tuple[float, float]:
    """(d_k, e_k) for the step x taken from ``state`` (so k = state.n + 1)."""
    if x not in (-1, 1):
        raise ValueError("x must be -1 or +1")
    e = conditional_step_mean(params, state)
    k = state.n + 1
    d = (x - e) * float(k) ** (-params.gamma)
    return d, e


def drift_A(params: ModelParams, t_history: Sequence[int]) -> float:
    """A_n from the positions T_1..T_{n-1} (so n = len(t_history) + 1)."""
    t = np.asarray(t_history, dtype=np.float64)
    k = np.arange(1, t.size + 1, dtype=np.float64)
    return params.beta + params.alpha * float(np.sum(t / (k * (k + 1.0) ** params.gamma)))


def remainder_R(params: ModelParams, state: WalkState, M: float, A: float) -> float:
    """R_n = A_n - (alpha/gamma)(S_n - T_n/n^gamma); bounded deterministically."""
    if state.n < 1:
        raise ValueError("remainder needs n >= 1")
    ratio = params.alpha / params.gamma
    r = A - ratio * (state.S - state.T * float(state.n) ** (-params.gamma))
    bound = remainder_bound(params)
    if abs(r) > bound + 1e-9:
        raise BoundViolationError(
            f"|R_{state.n}| = {abs(r)} exceeds deterministic bound {bound}"
        )
    return r


def residual_22(params: ModelParams, state: WalkState, M: float) -> float:
    """(1 - alpha/gamma) S_n - (M_n - alpha T_n/(gamma n^gamma)).

    Equal to R_n by algebra; still computable when the leading coefficient
    degenerates at gamma = alpha.
    """
    if state.n < 1:
        raise ValueError("residual needs n >= 1")
    ratio = params.alpha / params.gamma
    tn_term = ratio * state.T * float(state.n) ** (-params.gamma)
    return (1.0 - ratio) * state.S - (M - tn_term)


def coefficient_degenerate(params: ModelParams) -> bool:
    """True when gamma = alpha kills the (1 - alpha/gamma) coefficient."""
    return params.gamma == params.alpha


@functools.lru_cache(maxsize=None)
def sigma1_upper(gamma: float, terms: int = 1_000_000) -> float:
    """Upper estimate of sigma_1 = sum_{k>=1} k^(-gamma-1).

    Partial sum plus the integral tail bound terms^(-gamma)/gamma; an upper
    estimate is all the remainder bound needs.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be > 0")
    k = np.arange(1, terms + 1, dtype=np.float64)
    return float(np.sum(k ** (-gamma - 1.0))) + float(terms) ** (-gamma) / gamma


def remainder_bound(params: ModelParams) -> float:
    """Deterministic bound |beta| + (3 + sigma_1)|alpha| on |R_n|."""
    return abs(params.beta) + (3.0 + sigma1_upper(params.gamma)) * abs(params.alpha)


class DoobTracker:
    """Streaming decomposition observer for :func:`decaywalk.walk.simulate_path`.

    Keeps only O(1) state; attach via ``simulate_path(..., observer=tracker)``
    and read :meth:`state` at any point.
    """

    def __init__(self, params: ModelParams):
        self.params = params
        self.M = 0.0
        self.A = 0.0
        self.V2 = 0.0
        self.U2 = 0.0
        self._last = WalkState()

    def __call__(self, before: WalkState, x: int, after: WalkState) -> None:
        d, e = decompose_step(before, x, self.params)
        w = float(after.n) ** (-self.params.gamma)
        self.M += d
        self.A += e * w
        self.V2 += (1.0 - e * e) * w * w
        self.U2 += d * d
        self._last = after

    def state(self) -> DecompState:
        walk = self._last
        return DecompState(
            n=walk.n,
            S=walk.S,
            M=self.M,
            A=self.A,
            V2=self.V2,
            U2=self.U2,
            R=remainder_R(self.params, walk, self.M, self.A),
            resid22=residual_22(self.params, walk, self.M),
        )


def expected_variation(params: ModelParams, checkpoints: Sequence[int]) -> np.ndarray:
    """s_n^2 = sum_k E[d_k^2] at the checkpoints (path-independent).

    E[d_1^2] = 1 - beta^2; for k >= 2,
    E[d_k^2] = (1 - alpha^2 E[T_{k-1}^2]/(k-1)^2) k^(-2 gamma).
    """
    cps = [int(c) for c in checkpoints]
    if not cps or any(cps[i] >= cps[i + 1] for i in range(len(cps) - 1)) or cps[0] < 1:
        raise ValueError("checkpoints must be strictly increasing and >= 1")
    alpha, beta, gamma = params.alpha, params.beta, params.gamma
    out = np.empty(len(cps))
    s2 = 1.0 - beta * beta
    m2t = 1.0
    ci = 0
    k = 1
    while True:
        if k == cps[ci]:
            out[ci] = s2
            ci += 1
            if ci == len(cps):
                return out
        k += 1
        inv = 1.0 / (k - 1)
        cond_mean_sq = (alpha * inv) ** 2 * m2t
        s2 += (1.0 - cond_mean_sq) * float(k) ** (-2.0 * gamma)
        m2t = m2t * (1.0 + 2.0 * alpha * inv) + 1.0


def variations(
    signs: np.ndarray, params: ModelParams, checkpoints: Sequence[int]
) -> list[VariationTriple]:
    """V^2 and U^2 along one +-1 path, with the matching expected s^2.

    ``signs`` is the full step sequence; checkpoints index into it (1-based).
    """
    signs = np.asarray(signs, dtype=np.float64)
    n = signs.size
    cps = [int(c) for c in checkpoints]
    if not cps or cps[0] < 1 or cps[-1] > n:
        raise ValueError("checkpoints must lie in [1, len(signs)]")
    alpha, beta, gamma = params.alpha, params.beta, params.gamma
    k = np.arange(1, n + 1, dtype=np.float64)
    w = k ** (-gamma)
    t_prev = np.concatenate([[0.0], np.cumsum(signs)[:-1]])
    e = np.empty(n)
    e[0] = beta
    e[1:] = alpha * t_prev[1:] / (k[1:] - 1.0)
    d = (signs - e) * w
    v2 = np.cumsum((1.0 - e * e) * w * w)
    u2 = np.cumsum(d * d)
    s2 = expected_variation(params, cps)
    return [
        VariationTriple(n=c, s2=float(s2[i]), V2=float(v2[c - 1]), U2=float(u2[c - 1]))
        for i, c in enumerate(cps)
    ]
