"""Numba kernels for ensemble simulation.

Each trial runs the O(1)-state walk with its own xoshiro256** stream derived
from (master_seed, trial_index), mirroring :mod:`decaywalk.rng` bit for bit.
Trials write disjoint output rows, so ``prange`` scheduling cannot affect
results; thread count only affects wall time.

Positions and +1 counts are tracked as float64 (exact for |T| < 2^53) to
keep the inner loop free of int/float conversions.  Step sizes k^-gamma and
the reciprocals 1/(k-1) are precomputed tables shared read-only by all
threads.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

U64 = np.uint64
_SM_GAMMA = U64(0x9E3779B97F4A7C15)
_SM_M1 = U64(0xBF58476D1CE4E5B9)
_SM_M2 = U64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True, inline="always")
def _splitmix_next(s):
    s = s + _SM_GAMMA
    z = s
    z = (z ^ (z >> U64(30))) * _SM_M1
    z = (z ^ (z >> U64(27))) * _SM_M2
    z = z ^ (z >> U64(31))
    return s, z


@njit(cache=True, inline="always")
def _stream_state(master, trial_index):
    s = master + _SM_GAMMA * (U64(trial_index) + U64(1))
    s, s0 = _splitmix_next(s)
    s, s1 = _splitmix_next(s)
    s, s2 = _splitmix_next(s)
    s, s3 = _splitmix_next(s)
    return s0, s1, s2, s3


@njit(cache=True, inline="always")
def _next_uniform(s0, s1, s2, s3):
    r = ((s1 * U64(5)) << U64(7) | (s1 * U64(5)) >> U64(57)) * U64(9)
    t = s1 << U64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = (s3 << U64(45)) | (s3 >> U64(19))
    return s0, s1, s2, s3, float(r >> U64(11)) * _INV53


def step_tables(gamma: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """(w, inv_hist): w[k] = k^-gamma, inv_hist[k] = 1/(k-1) for k >= 2."""
    k = np.arange(n_max + 1, dtype=np.float64)
    w = np.zeros(n_max + 1)
    w[1:] = k[1:] ** (-gamma)
    inv_hist = np.zeros(n_max + 1)
    inv_hist[2:] = 1.0 / (k[2:] - 1.0)
    return w, inv_hist


@njit(cache=True, parallel=True)
def walk_ensemble(
    alpha, beta, n_max, w, inv_hist, master, trial_offset, cps, T_out, S_out, cross_out
):
    q = 0.5 * (1.0 + beta)
    half = 0.5 * (1.0 - alpha)
    ncp = cps.shape[0]
    for t in prange(T_out.shape[0]):
        s0, s1, s2, s3 = _stream_state(master, trial_offset + t)
        T = 0.0
        H = 0.0
        S = 0.0
        cross = 0
        ci = 0
        for k in range(1, n_max + 1):
            s0, s1, s2, s3, u = _next_uniform(s0, s1, s2, s3)
            if k == 1:
                pp = q
            else:
                pp = alpha * H * inv_hist[k] + half
            s_prev = S
            if u < pp:
                H += 1.0
                T += 1.0
                S += w[k]
            else:
                T -= 1.0
                S -= w[k]
            if s_prev * S < 0.0:
                cross += 1
            if ci < ncp and k == cps[ci]:
                T_out[t, ci] = T
                S_out[t, ci] = S
                cross_out[t, ci] = cross
                ci += 1


@njit(cache=True, parallel=True)
def decomposition_ensemble(
    alpha,
    beta,
    gamma,
    n_max,
    w,
    inv_hist,
    master,
    trial_offset,
    cps,
    T_out,
    S_out,
    M_out,
    A_out,
    V2_out,
    U2_out,
    max_abs_R,
    max_resid_gap,
    max_doob_gap,
):
    q = 0.5 * (1.0 + beta)
    half = 0.5 * (1.0 - alpha)
    ratio = alpha / gamma
    ncp = cps.shape[0]
    for t in prange(T_out.shape[0]):
        s0, s1, s2, s3 = _stream_state(master, trial_offset + t)
        T = 0.0
        H = 0.0
        S = 0.0
        M = 0.0
        A = 0.0
        V2 = 0.0
        U2 = 0.0
        mR = 0.0
        mgap = 0.0
        mdoob = 0.0
        ci = 0
        for k in range(1, n_max + 1):
            s0, s1, s2, s3, u = _next_uniform(s0, s1, s2, s3)
            if k == 1:
                pp = q
                e = beta
            else:
                pp = alpha * H * inv_hist[k] + half
                e = alpha * T * inv_hist[k]
            wk = w[k]
            if u < pp:
                x = 1.0
                H += 1.0
            else:
                x = -1.0
            T += x
            S += x * wk
            d = (x - e) * wk
            M += d
            A += e * wk
            V2 += (1.0 - e * e) * wk * wk
            U2 += d * d
            R = A - ratio * (S - T * wk)
            resid = (1.0 - ratio) * S - (M - ratio * T * wk)
            if abs(R) > mR:
                mR = abs(R)
            if abs(R - resid) > mgap:
                mgap = abs(R - resid)
            doob = abs(S - (M + A))
            if doob > mdoob:
                mdoob = doob
            if ci < ncp and k == cps[ci]:
                T_out[t, ci] = T
                S_out[t, ci] = S
                M_out[t, ci] = M
                A_out[t, ci] = A
                V2_out[t, ci] = V2
                U2_out[t, ci] = U2
                ci += 1
        max_abs_R[t] = mR
        max_resid_gap[t] = mgap
        max_doob_gap[t] = mdoob
