import math

import numpy as np
import pytest
from scipy.special import zeta

from decaywalk import (
    DoobTracker,
    TrialStream,
    WalkState,
    decompose_step,
    drift_A,
    enumerate_paths,
    expected_variation,
    remainder_R,
    remainder_bound,
    residual_22,
    sigma1_upper,
    simulate_ensemble,
    simulate_path,
    validate_params,
    variations,
)
from decaywalk.decomposition import BoundViolationError, coefficient_degenerate


def test_decompose_step_memoryless():
    p = validate_params(0.0, 0.2, 0.5)
    d, e = decompose_step(WalkState(n=3, T=1, H=2), +1, p)
    assert e == 0.0
    assert d == pytest.approx(4.0**-0.5, abs=1e-15)


def test_decompose_step_first_step_deterministic():
    p = validate_params(0.3, 1.0, 0.5)
    d, e = decompose_step(WalkState(), +1, p)
    assert e == 1.0 and d == 0.0


def test_decompose_step_worked_example():
    # alpha=0.5, T_2=2, step 3 down, gamma=1: e = 0.5, d = -0.5
    p = validate_params(0.5, 0.0, 1.0)
    d, e = decompose_step(WalkState(n=2, T=2, H=2), -1, p)
    assert e == pytest.approx(0.5, abs=1e-15)
    assert d == pytest.approx(-0.5, abs=1e-15)


def test_decompose_step_bounds():
    p = validate_params(-0.8, 0.4, 0.9)
    for n, h, x in [(1, 1, -1), (4, 0, 1), (9, 9, 1)]:
        d, e = decompose_step(WalkState(n=n, T=2 * h - n, H=h), x, p)
        assert abs(e) <= 1.0
        assert abs(d) <= 2.0 * float(n + 1) ** -0.9 + 1e-15


def test_drift_A_memoryless_is_beta():
    p = validate_params(0.0, -0.6, 0.7)
    assert drift_A(p, []) == -0.6
    assert drift_A(p, [1, 2, 1]) == -0.6


def test_drift_A_hand_example():
    p = validate_params(0.5, 1.0, 1.0)
    assert drift_A(p, [1, 2]) == pytest.approx(1.0 + 0.5 * (0.5 + 2.0 / 6.0), abs=1e-15)


def test_drift_A_equals_accumulated_conditional_means():
    from decaywalk.walk import advance

    p = validate_params(0.7, -0.2, 0.6)
    stream = TrialStream(21, 0)
    state = WalkState()
    track = DoobTracker(p)
    t_hist = []
    for _ in range(200):
        new = advance(state, p, stream.random())
        track(state, new.T - state.T, new)
        if state.n >= 1:
            t_hist.append(state.T)
        state = new
    assert track.A == pytest.approx(drift_A(p, t_hist), abs=1e-12)


def test_remainder_memoryless():
    p = validate_params(0.0, 0.45, 0.8)
    tracker = DoobTracker(p)
    simulate_path(p, 50, TrialStream(2, 0), observer=tracker)
    dec = tracker.state()
    assert dec.R == pytest.approx(0.45, abs=1e-12)
    assert remainder_bound(p) == pytest.approx(0.45, abs=1e-12)


def test_remainder_first_step_is_beta():
    p = validate_params(0.6, -0.3, 0.9)
    tracker = DoobTracker(p)
    simulate_path(p, 1, TrialStream(3, 0), observer=tracker)
    assert tracker.state().R == pytest.approx(-0.3, abs=1e-14)


def test_remainder_bound_violation_raises():
    p = validate_params(0.5, 0.0, 0.5)
    state = WalkState(n=4, T=2, H=3, S=1.0)
    with pytest.raises(BoundViolationError):
        remainder_R(p, state, M=0.0, A=1e6)


def test_residual_equals_remainder_along_paths():
    for alpha, beta, gamma in [(0.6, 0.4, 0.8), (-0.9, 0.1, 0.35), (0.25, 1.0, 1.0)]:
        p = validate_params(alpha, beta, gamma)
        tracker = DoobTracker(p)
        simulate_path(p, 5000, TrialStream(8, 1), observer=tracker)
        dec = tracker.state()
        assert dec.resid22 == pytest.approx(dec.R, abs=1e-9)
        assert dec.S == pytest.approx(dec.M + dec.A, abs=1e-9)


def test_residual_computable_at_degenerate_coefficient():
    p = validate_params(0.5, 0.2, 0.5)
    assert coefficient_degenerate(p)
    tracker = DoobTracker(p)
    simulate_path(p, 100, TrialStream(4, 0), observer=tracker)
    dec = tracker.state()
    assert math.isfinite(dec.resid22)
    assert dec.resid22 == pytest.approx(dec.R, abs=1e-12)


def test_martingale_increments_have_zero_conditional_mean():
    """Over the exact enumerated law, E[d_k | prefix] = 0 for every prefix."""
    p = validate_params(0.45, -0.35, 0.7)
    n = 8
    dist = enumerate_paths(p, n)
    signs = dist.signs.astype(np.int64)
    prob = dist.prob
    for k in range(1, n + 1):
        # group paths by their k-1 prefix and average d_k conditionally
        t_prev = signs[:, : k - 1].sum(axis=1).astype(float)
        e = np.full(signs.shape[0], p.beta) if k == 1 else p.alpha * t_prev / (k - 1)
        d = (signs[:, k - 1] - e) * float(k) ** (-p.gamma)
        if k == 1:
            assert abs(float(prob @ d)) < 1e-12
            continue
        prefixes = {}
        for i in range(signs.shape[0]):
            key = tuple(signs[i, : k - 1])
            w, acc = prefixes.get(key, (0.0, 0.0))
            prefixes[key] = (w + prob[i], acc + prob[i] * d[i])
        for key, (w, acc) in prefixes.items():
            if w > 0.0:
                assert abs(acc / w) < 1e-12


def test_sigma1_upper_bounds_zeta():
    for gamma in (0.25, 0.5, 1.0, 2.0):
        upper = sigma1_upper(gamma)
        true = float(zeta(gamma + 1.0, 1))
        assert true <= upper <= true + 1e-3 + 2.0 * 10**6 ** (-gamma) / gamma


def test_remainder_bound_formula():
    p = validate_params(0.6, 0.4, 0.8)
    assert remainder_bound(p) == pytest.approx(
        0.4 + (3.0 + sigma1_upper(0.8)) * 0.6, rel=1e-12
    )


def uniform_array(n, seed):
    s = TrialStream(seed, 0)
    return np.array([s.random() for _ in range(n)])


def test_variations_memoryless_closed_form():
    p = validate_params(0.0, 0.0, 0.6)
    signs = np.where(uniform_array(40, seed=6) < 0.5, -1.0, 1.0)
    triples = variations(signs, p, [40])
    k = np.arange(1, 41, dtype=float)
    ref = float(np.sum(k**-1.2))
    assert triples[0].V2 == pytest.approx(ref, abs=1e-12)
    assert triples[0].U2 == pytest.approx(ref, abs=1e-12)
    assert triples[0].s2 == pytest.approx(ref, abs=1e-12)


def test_variations_first_step_increments():
    p = validate_params(0.4, 0.3, 0.5)
    up = variations(np.array([1.0]), p, [1])[0]
    assert up.V2 == pytest.approx(1.0 - 0.3**2, abs=1e-15)
    assert up.U2 == pytest.approx((1.0 - 0.3) ** 2, abs=1e-15)
    assert up.s2 == pytest.approx(1.0 - 0.3**2, abs=1e-15)


def test_variations_nondecreasing():
    p = validate_params(0.5, -0.5, 0.35)
    signs = np.sign(uniform_array(500, seed=9) - 0.4)
    triples = variations(signs, p, [10, 100, 500])
    for a, b in zip(triples, triples[1:]):
        assert b.V2 >= a.V2 and b.U2 >= a.U2 and b.s2 >= a.s2


def test_expected_variation_matches_enumeration():
    """s_n^2 = sum E[d_k^2]: check against the exact path law."""
    p = validate_params(0.55, 0.25, 0.8)
    n = 8
    dist = enumerate_paths(p, n)
    signs = dist.signs.astype(float)
    t_paths = np.cumsum(signs, axis=1)
    total = 0.0
    for k in range(1, n + 1):
        if k == 1:
            d = (signs[:, 0] - p.beta) * 1.0
        else:
            d = (signs[:, k - 1] - p.alpha * t_paths[:, k - 2] / (k - 1)) * float(k) ** (
                -p.gamma
            )
        total += float(dist.prob @ (d * d))
    assert expected_variation(p, [n])[0] == pytest.approx(total, abs=1e-12)


def test_variation_ratio_near_one_below_critical():
    """Predictable variation tracks sum k^-2gamma (100 paths, n = 1e5)."""
    p = validate_params(0.3, 0.0, 0.25)
    arr = simulate_ensemble(
        p, 10**5, 100, checkpoints=[10**5], seed=123, include_decomposition=True
    )
    ref = float(np.sum(np.arange(1, 10**5 + 1, dtype=float) ** -0.5))
    ratios = arr.V2[:, 0] / ref
    assert ratios.min() > 0.95 and ratios.max() < 1.05


def test_realized_minus_predictable_shrinks():
    p = validate_params(0.3, 0.0, 0.25)
    arr = simulate_ensemble(
        p, 10**5, 100, checkpoints=[10**4, 10**5], seed=123, include_decomposition=True
    )
    s2 = expected_variation(p, [10**4, 10**5])
    early = np.abs(arr.U2[:, 0] - arr.V2[:, 0]) / s2[0]
    late = np.abs(arr.U2[:, 1] - arr.V2[:, 1]) / s2[1]
    assert late.mean() < early.mean()
    assert late.mean() < 0.01


def test_doob_gap_stays_tiny_along_long_paths():
    p = validate_params(0.6, 0.4, 0.8)
    arr = simulate_ensemble(
        p, 10**6, 20, checkpoints=[10**6], seed=31, include_decomposition=True
    )
    assert float(arr.max_doob_gap.max()) <= 1e-9


def test_martingale_variance_positive_and_stable_above_half():
    """gamma > 1/2: Var(M_n) settles (checked between n = 1e4 and 1e5)."""
    p = validate_params(0.3, 0.5, 0.8)
    arr = simulate_ensemble(
        p, 10**5, 10**4, checkpoints=[10**4, 10**5], seed=55, include_decomposition=True
    )
    v1 = float(np.var(arr.M[:, 0], ddof=1))
    v2 = float(np.var(arr.M[:, 1], ddof=1))
    assert v2 > 0.0
    assert abs(v2 - v1) / v2 < 0.10
    # and the sample variance sits near the exact s_n^2
    s2 = expected_variation(p, [10**4, 10**5])
    assert v2 == pytest.approx(s2[1], rel=0.05)
