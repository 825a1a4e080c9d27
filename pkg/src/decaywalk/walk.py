"""Single-path simulation of the memory walk.

Two mechanisms are provided:

* :func:`advance` / :func:`simulate_path` step the walk through its
  conditional law ``P(X_{n+1} = +1 | history) = alpha*H_n/n + (1-alpha)/2``,
  which needs only O(1) state and therefore scales to very long paths.
* :func:`simulate_path_resampling` is the literal construction: it draws a
  uniform index into the stored history and copies (probability p) or flips
  (probability 1-p) that step.  It keeps the whole history and exists for
  law-equivalence testing against the O(1) simulator.

Both produce the same joint law of the signs; the enumeration module checks
that equivalence exactly at small horizons.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .params import ModelParams

Observer = Callable[["WalkState", int, "WalkState"], None]


@dataclass(frozen=True)
class WalkState:
    """Walk cursor after n steps: unit-step position T, +1 count H, decayed sum S."""

    n: int = 0
    T: int = 0
    H: int = 0
    S: float = 0.0

    def __post_init__(self):
        if self.n < 0 or not (0 <= self.H <= self.n):
            raise ValueError(f"inconsistent state n={self.n}, H={self.H}")
        if self.T != 2 * self.H - self.n:
            raise ValueError(f"T={self.T} violates T = 2H - n with H={self.H}, n={self.n}")


def plus_probability(params: ModelParams, state: WalkState) -> float:
    """P(next step = +1 | current state); returns q before the first step."""
    if state.n == 0:
        return params.q
    return params.alpha * state.H / state.n + 0.5 * (1.0 - params.alpha)


def conditional_step_mean(params: ModelParams, state: WalkState) -> float:
    """E[next step | current state] = alpha*T_n/n for n >= 1, beta at n = 0."""
    if state.n == 0:
        return params.beta
    return params.alpha * state.T / state.n


def advance(state: WalkState, params: ModelParams, u: float) -> WalkState:
    """Consume one uniform variate in [0, 1) and take one step."""
    x = 1 if u < plus_probability(params, state) else -1
    k = state.n + 1
    return WalkState(
        n=k,
        T=state.T + x,
        H=state.H + (1 if x == 1 else 0),
        S=state.S + x * float(k) ** (-params.gamma),
    )


def simulate_path(
    params: ModelParams,
    n_max: int,
    rng,
    checkpoints: Optional[Sequence[int]] = None,
    observer: Optional[Observer] = None,
) -> list[WalkState]:
    """Run one path to n_max, returning WalkState snapshots at the checkpoints.

    ``rng`` is anything with a numpy-style ``random()`` method returning a
    uniform variate in [0, 1); exactly one variate is consumed per step, so
    identical streams give bit-identical trajectories.  ``checkpoints`` must
    be a sorted subset of [1, n_max] and defaults to [n_max].  An observer,
    if given, is called as ``observer(state_before, x, state_after)`` at every
    step; the decomposition tracker plugs in here.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if n_max == 0:
        return []
    if checkpoints is None:
        checkpoints = [n_max]
    cps = list(checkpoints)
    if any(cps[i] >= cps[i + 1] for i in range(len(cps) - 1)):
        raise ValueError("checkpoints must be strictly increasing")
    if cps and (cps[0] < 1 or cps[-1] > n_max):
        raise ValueError("checkpoints must lie in [1, n_max]")

    state = WalkState()
    snapshots: list[WalkState] = []
    ci = 0
    for k in range(1, n_max + 1):
        u = rng.random()
        new = advance(state, params, u)
        if observer is not None:
            observer(state, new.T - state.T, new)
        state = new
        if ci < len(cps) and k == cps[ci]:
            snapshots.append(state)
            ci += 1
    return snapshots


def simulate_path_resampling(params: ModelParams, n_max: int, rng) -> WalkState:
    """Literal mechanism: store all steps, copy or flip a uniform past one.

    Consumes one uniform for the first step, then two per step (index draw,
    copy/flip draw).  O(n) memory; only used to cross-check the law of the
    O(1) simulator.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if n_max == 0:
        return WalkState()
    steps = np.empty(n_max, dtype=np.int64)
    steps[0] = 1 if rng.random() < params.q else -1
    for n in range(1, n_max):
        j = int(rng.random() * n)  # uniform on {0, ..., n-1}
        copy = rng.random() < params.p
        steps[n] = steps[j] if copy else -steps[j]
    T = int(steps.sum())
    H = int((steps == 1).sum())
    k = np.arange(1, n_max + 1, dtype=np.float64)
    S = float((steps * k ** (-params.gamma)).sum())
    return WalkState(n=n_max, T=T, H=H, S=S)
