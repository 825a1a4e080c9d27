"""Exact moment and distribution computations for the memory walk.

Everything here is deterministic arithmetic on the model parameters:

* the product coefficients ``a_n = prod_{k<n} (1 + alpha/k)`` that propagate
  conditional expectations (``E[T_n] = beta * a_n``),
* O(n) recursions for E[T_n^2], E[S_n] and E[S_n^2],
* the exact law of T_n by dynamic programming over the +1 count,
* the convergent-regime series for E[S_infinity] with a certified tail bound,
* the leading-order asymptotics of E[T_n^2] in the three memory regimes.

The coefficients are always built by the product recursion, never from Gamma
ratios, so alpha = -1 (where a_k = 0 for k >= 2) needs no special casing;
identities that are usually written as ratios a_m/a_l are evaluated as the
partial products prod_{j=l}^{m-1} (1 + alpha/j) instead, which are exact for
every alpha in [-1, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .params import ModelParams
from .regime import gamma_c


class NotConvergentRegimeError(ValueError):
    """E[S_infinity] requested where the walk does not converge."""


@dataclass(frozen=True)
class MomentTable:
    """Exact T/S moments recorded at the requested checkpoints."""

    checkpoints: np.ndarray
    mean_T: np.ndarray
    m2_T: np.ndarray
    mean_S: np.ndarray
    m2_S: np.ndarray

    @property
    def var_T(self) -> np.ndarray:
        return self.m2_T - self.mean_T**2

    @property
    def var_S(self) -> np.ndarray:
        return self.m2_S - self.mean_S**2


@dataclass(frozen=True)
class TnDistribution:
    """Exact law of T_n on its support {-n, -n+2, ..., n}."""

    n: int
    t_support: np.ndarray
    prob: np.ndarray

    def mean(self) -> float:
        return float(self.prob @ self.t_support)

    def second_moment(self) -> float:
        return float(self.prob @ (self.t_support.astype(np.float64) ** 2))


def gamma_factors(alpha: float, n: int) -> np.ndarray:
    """Coefficients a_0..a_n with a_k = prod_{j=1}^{k-1} (1 + alpha/j).

    a[0] = a[1] = 1 by convention.  Built by cumulative product, so the
    alpha = -1 boundary (a_k = 0 for k >= 2) is exact.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = np.ones(n + 1, dtype=np.float64)
    if n >= 2:
        a[2:] = np.cumprod(1.0 + alpha / np.arange(1, n, dtype=np.float64))
    return a


def partial_product(alpha: float, lo: int, hi: int) -> float:
    """prod_{j=lo}^{hi-1} (1 + alpha/j), the ratio a_hi/a_lo without division."""
    if not (1 <= lo <= hi):
        raise ValueError("need 1 <= lo <= hi")
    if lo == hi:
        return 1.0
    return float(np.prod(1.0 + alpha / np.arange(lo, hi, dtype=np.float64)))


def mean_T(params: ModelParams, n: int) -> float:
    """E[T_n] = beta * a_n (0 at n = 0)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0.0
    return params.beta * partial_product(params.alpha, 1, n)


def second_moment_T(params: ModelParams, n: int) -> float:
    """E[T_n^2] via the exact recursion m_{k+1} = m_k (1 + 2 alpha/k) + 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0.0
    two_alpha = 2.0 * params.alpha
    m2 = 1.0
    for k in range(1, n):
        m2 = m2 * (1.0 + two_alpha / k) + 1.0
    return m2


def cross_moment_XT(params: ModelParams, k: int, m: int) -> float:
    """E[X_k T_m] for m >= k >= 1.

    Propagates E[X_k T_k] = 1 + alpha * E[T_{k-1}^2]/(k-1) forward through
    the conditional-expectation factors (1 + alpha/j).
    """
    if not (1 <= k <= m):
        raise ValueError("need 1 <= k <= m")
    if k == 1:
        g = 1.0
    else:
        g = 1.0 + params.alpha * second_moment_T(params, k - 1) / (k - 1)
    return g * partial_product(params.alpha, k, m)


def correlation_T(params: ModelParams, l: int, m: int) -> float:
    """E[T_l T_m] for m >= l >= 1, exact at every alpha including -1."""
    if not (1 <= l <= m):
        raise ValueError("need 1 <= l <= m")
    return second_moment_T(params, l) * partial_product(params.alpha, l, m)


def mean_S(params: ModelParams, n: int) -> float:
    """E[S_n] = sum_k E[X_k] k^-gamma with E[X_k] = beta (a_k - a_{k-1})."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0.0
    alpha, beta, gamma = params.alpha, params.beta, params.gamma
    total = beta  # k = 1 term: E[X_1] = beta, weight 1
    a = 1.0
    for k in range(2, n + 1):
        inv = 1.0 / (k - 1)
        total += beta * alpha * a * inv * float(k) ** (-gamma)
        a *= 1.0 + alpha * inv
    return total


def second_moment_S(params: ModelParams, n: int) -> float:
    """E[S_n^2], exact, in one O(n) pass (see :func:`moment_table`)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0.0
    table = moment_table(params, [n])
    return float(table.m2_S[0])


def variance_S(params: ModelParams, n: int) -> float:
    return second_moment_S(params, n) - mean_S(params, n) ** 2


def moment_table(params: ModelParams, checkpoints: Sequence[int]) -> MomentTable:
    """One exact O(n_max) sweep recording all four moments at checkpoints.

    The S second moment uses the prefix sum
    ``P_m = sum_{k<=m} E[X_k T_m] k^-gamma``, which obeys
    ``P_m = (1 + alpha/(m-1)) P_{m-1} + g_m m^-gamma`` and feeds the cross
    term ``2 alpha/(m-1) * P_{m-1} * m^-gamma`` of E[S_m^2].  No coefficient
    ratios appear, so the sweep is uniform in alpha, including alpha = -1.
    """
    cps = [int(c) for c in checkpoints]
    if not cps or any(cps[i] >= cps[i + 1] for i in range(len(cps) - 1)):
        raise ValueError("checkpoints must be non-empty and strictly increasing")
    if cps[0] < 1:
        raise ValueError("checkpoints must be >= 1")
    n_max = cps[-1]
    alpha, beta, gamma = params.alpha, params.beta, params.gamma
    neg_gamma = -gamma

    out = {key: np.empty(len(cps)) for key in ("mean_T", "m2_T", "mean_S", "m2_S")}
    # state after step k = 1
    a = 1.0          # a_k
    m2t = 1.0        # E[T_k^2]
    ms = beta        # E[S_k]
    sum_w2 = 1.0     # sum of k^-2gamma
    cross = 0.0      # twice the off-diagonal part of E[S_k^2]
    prefix = 1.0     # P_k
    ci = 0
    k = 1
    while True:
        if k == cps[ci]:
            out["mean_T"][ci] = beta * a
            out["m2_T"][ci] = m2t
            out["mean_S"][ci] = ms
            out["m2_S"][ci] = sum_w2 + cross
            ci += 1
            if ci == len(cps):
                break
        k += 1
        inv = 1.0 / (k - 1)
        alpha_inv = alpha * inv
        w = float(k) ** neg_gamma
        g = 1.0 + alpha_inv * m2t
        cross += 2.0 * alpha_inv * prefix * w
        prefix = (1.0 + alpha_inv) * prefix + g * w
        m2t = m2t * (1.0 + 2.0 * alpha_inv) + 1.0
        ms += beta * alpha_inv * a * w
        a *= 1.0 + alpha_inv
        sum_w2 += w * w
    return MomentTable(
        checkpoints=np.asarray(cps, dtype=np.int64),
        mean_T=out["mean_T"],
        m2_T=out["m2_T"],
        mean_S=out["mean_S"],
        m2_S=out["m2_S"],
    )


def exact_T_distribution(params: ModelParams, n: int) -> TnDistribution:
    """Exact law of T_n by dynamic programming over the +1 count."""
    if n < 1:
        raise ValueError("n must be >= 1")
    prob = _h_dp_profile(params, n)[-1]
    t = 2 * np.arange(n + 1, dtype=np.int64) - n
    return TnDistribution(n=n, t_support=t, prob=prob)


def t_distribution_moment_profile(params: ModelParams, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(E[T_k], E[T_k^2]) for k = 1..n, read off the same DP as the law.

    Index 0 corresponds to k = 1.  This is the distribution-side route used
    to cross-check the recursion-side moments.
    """
    means = np.empty(n)
    m2s = np.empty(n)
    half = 0.5 * (1.0 - params.alpha)
    prob = np.array([1.0 - params.q, params.q])
    for j in range(1, n + 1):
        t = 2.0 * np.arange(j + 1) - j
        means[j - 1] = prob @ t
        m2s[j - 1] = prob @ (t * t)
        if j == n:
            break
        h = np.arange(j + 1, dtype=np.float64)
        pp = params.alpha * h / j + half
        nxt = np.zeros(j + 2)
        nxt[1:] += prob * pp
        nxt[:-1] += prob * (1.0 - pp)
        prob = nxt
    return means, m2s


def _h_dp_profile(params: ModelParams, n: int) -> list[np.ndarray]:
    half = 0.5 * (1.0 - params.alpha)
    prob = np.array([1.0 - params.q, params.q])
    out = [prob]
    for j in range(1, n):
        h = np.arange(j + 1, dtype=np.float64)
        pp = params.alpha * h / j + half
        nxt = np.zeros(j + 2)
        nxt[1:] += prob * pp
        nxt[:-1] += prob * (1.0 - pp)
        prob = nxt
        out.append(prob)
    return out


def limit_mean_S(
    params: ModelParams, tol: float = 1e-6, chunk: int = 1 << 14
) -> tuple[float, int]:
    """E[S_infinity] = beta + alpha*beta * sum_k a_k / (k (k+1)^gamma).

    Only defined in the convergent regime gamma > gamma_c(alpha).  The terms
    decay like k^(alpha-1-gamma), so the tail after K terms is enclosed by
    integral comparison: with r_k = a_k/k^alpha monotone in k with limit
    1/Gamma(1+alpha), the tail lies between
    min(r_K, r_inf) * (K+2)^(alpha-gamma)/(gamma-alpha) and
    max(r_K, r_inf) * K^(alpha-gamma)/(gamma-alpha).  The midpoint of the
    enclosure is added to the partial sum and summation stops once the
    certified half-width is below ``tol``.  Returns (value, terms consumed).
    """
    alpha, beta, gamma = params.alpha, params.beta, params.gamma
    if not (gamma > gamma_c(alpha)):
        raise NotConvergentRegimeError(
            f"gamma={gamma} <= gamma_c({alpha})={gamma_c(alpha)}: S_n does not converge"
        )
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    scale = abs(alpha * beta)
    if scale == 0.0:
        return beta, 0
    if alpha == -1.0:
        # a_k = 0 for k >= 2: the series is its first term exactly
        return beta + alpha * beta / 2.0**gamma, 1

    r_inf = 1.0 / math.gamma(1.0 + alpha)
    total = 0.0
    a = 1.0  # a_k at the chunk head
    k0 = 1
    while True:
        ks = np.arange(k0, k0 + chunk, dtype=np.float64)
        rel = np.empty(chunk)
        rel[0] = 1.0
        np.cumprod(1.0 + alpha / ks[:-1], out=rel[1:])
        a_vals = a * rel
        total += float(np.sum(a_vals / (ks * (ks + 1.0) ** gamma)))
        a = a_vals[-1] * (1.0 + alpha / ks[-1])
        k0 += chunk
        terms = k0 - 1
        r_next = a / float(terms + 1) ** alpha  # r_{K+1}, same side of r_inf
        lo = min(r_next, r_inf) * float(terms + 2) ** (alpha - gamma) / (gamma - alpha)
        hi = max(r_next, r_inf) * float(terms) ** (alpha - gamma) / (gamma - alpha)
        if scale * 0.5 * (hi - lo) <= tol:
            value = beta + alpha * beta * (total + 0.5 * (lo + hi))
            return value, terms


def asymptotic_m2_T(alpha: float, n: int) -> float:
    """Leading-order E[T_n^2]: diffusive, marginal, or superdiffusive."""
    if not (-1.0 <= alpha <= 1.0):
        raise ValueError("alpha must lie in [-1, 1]")
    if n < 3:
        raise ValueError("asymptotic form needs n >= 3")
    if alpha < 0.5:
        return n / (1.0 - 2.0 * alpha)
    if alpha == 0.5:
        return n * math.log(n)
    return n ** (2.0 * alpha) / ((2.0 * alpha - 1.0) * math.gamma(2.0 * alpha))
