import math

import numpy as np
import pytest

from decaywalk import (
    clt_moments,
    drift_coupling,
    moment_table,
    oscillation_census,
    validate_params,
    variance_scaling_fit,
)
from decaywalk.experiments import clt_scale


def test_exact_slope_independent_case():
    # Var(S_n) = sum k^-1/2 ~ 2 sqrt(n): slope 1/2
    p = validate_params(0.0, 0.0, 0.25)
    fit = variance_scaling_fit(p)
    assert fit.slope == pytest.approx(0.5, abs=0.02)


def test_exact_slope_with_memory():
    p = validate_params(0.3, 0.0, 0.25)
    fit = variance_scaling_fit(p)
    assert fit.slope == pytest.approx(0.5, abs=0.05)


def test_marginal_memory_has_extra_log_growth():
    p = validate_params(0.5, 0.0, 0.25)
    fit = variance_scaling_fit(p)
    assert fit.slope > 0.55


def test_mc_slope_matches_exact():
    p = validate_params(0.0, 0.0, 0.25)
    cps = [1000, 3000, 10000, 30000]
    exact = variance_scaling_fit(p, checkpoints=cps)
    mc = variance_scaling_fit(p, checkpoints=cps, source="mc", trials=3000, seed=1)
    assert mc.slope == pytest.approx(exact.slope, abs=0.06)
    with pytest.raises(ValueError):
        variance_scaling_fit(p, source="nope")


def test_drift_coupling_strong_in_drift_regime():
    p = validate_params(0.8, 0.0, 0.3)
    c = drift_coupling(p, 10**4, 400, seed=2)
    assert not c.degenerate
    assert c.correlation > 0.99


def test_drift_coupling_degenerate_flagged():
    # alpha = beta = 1: every path is deterministic all-+1
    p = validate_params(1.0, 1.0, 0.3)
    c = drift_coupling(p, 500, 50, seed=3)
    assert c.degenerate
    assert math.isnan(c.correlation)


def test_drift_coupling_domain():
    with pytest.raises(ValueError):
        drift_coupling(validate_params(0.3, 0.0, 0.2), 100, 10)
    with pytest.raises(ValueError):
        drift_coupling(validate_params(0.8, 0.0, 0.9), 100, 10)


def test_drift_residual_bounded_for_gamma_between_half_and_alpha():
    """alpha=0.8, gamma=0.75: S_n minus its fitted drift stays bounded,
    i.e. its distribution across paths is flat from decade to decade."""
    from decaywalk import simulate_ensemble

    p = validate_params(0.8, 0.0, 0.75)
    a, g = 0.8, 0.75
    cps = [10**3, 10**4, 10**5]
    arr = simulate_ensemble(p, 10**5, 200, checkpoints=cps, seed=4)
    l_hat = arr.T[:, -1] / (10**5) ** a
    dev = np.empty((200, len(cps)))
    for j, n in enumerate(cps):
        drift = (a / (a - g)) * l_hat * n ** (a - g)
        dev[:, j] = np.abs(arr.S[:, j] - drift)
    assert np.all(np.isfinite(dev))
    for q in (50, 90):
        quantiles = [float(np.percentile(dev[:, j], q)) for j in range(len(cps))]
        for early, late in zip(quantiles, quantiles[1:]):
            assert 0.8 <= late / early <= 1.25


def test_oscillation_census_counts_crossings():
    p = validate_params(0.0, 0.0, 0.25)
    c = oscillation_census(p, 2000, 300, seed=5)
    assert c.counts.shape == (300,)
    assert c.median > 0
    assert c.counts.min() >= 0


def test_oscillation_census_after_window():
    p = validate_params(0.0, 0.0, 0.25)
    full = oscillation_census(p, 2000, 300, seed=5)
    tail = oscillation_census(p, 2000, 300, seed=5, after=1000)
    head = oscillation_census(p, 1000, 300, seed=5)
    assert np.array_equal(full.counts, head.counts + tail.counts)


def test_convergent_regime_sign_changes_stabilize():
    p = validate_params(0.0, 0.0, 1.0)
    tail = oscillation_census(p, 10**5, 400, seed=6, after=10**4)
    assert tail.fraction_zero >= 0.95


def test_clt_scale_selection():
    assert clt_scale(validate_params(0.2, 0.0, 1.0), 100, "T") == 10.0
    assert clt_scale(validate_params(0.5, 0.0, 1.0), 100, "T") == pytest.approx(
        math.sqrt(100 * math.log(100))
    )
    assert clt_scale(validate_params(0.2, 0.0, 0.5), 100, "S") == pytest.approx(
        math.sqrt(math.log(100))
    )
    assert clt_scale(validate_params(0.5, 0.0, 0.25), 100, "S") == pytest.approx(
        math.sqrt(100**0.5 * math.log(100))
    )
    with pytest.raises(ValueError):
        clt_scale(validate_params(0.8, 0.0, 1.0), 100, "T")
    with pytest.raises(ValueError):
        clt_scale(validate_params(0.2, 0.0, 0.7), 100, "S")
    with pytest.raises(ValueError):
        clt_scale(validate_params(0.2, 0.0, 0.5), 100, "X")


def test_clt_moments_against_exact_finite_n():
    """Standardized variance agrees with the exact finite-n value."""
    p = validate_params(0.2, 0.0, 1.0)
    n, trials = 2000, 20000
    m = clt_moments(p, n, trials, statistic="T", seed=7)
    exact_var = float(moment_table(p, [n]).var_T[0]) / n
    se = exact_var * math.sqrt(2.0 / (trials - 1))
    assert abs(m.variance - exact_var) <= 5.0 * se
    assert abs(m.skewness) < 0.1
    assert abs(m.excess_kurtosis) < 0.2


def test_clt_moments_critical_line_matches_exact_not_asymptote():
    """At gamma = 1/2 the exact finite-n standardized variance is the honest
    target; the asymptotic constant 1/(1-2a)^2 is approached only at log
    speed (the exact ratio still rises toward it between horizons)."""
    p = validate_params(0.3, 0.0, 0.5)
    n, trials = 10**5, 3000
    m = clt_moments(p, n, trials, statistic="S", seed=8)
    table = moment_table(p, [10**4, n])
    exact_now = float(table.var_S[1]) / math.log(n)
    exact_before = float(table.var_S[0]) / math.log(10**4)
    se = exact_now * math.sqrt(2.0 / (trials - 1))
    assert abs(m.variance - exact_now) <= 5.0 * se
    limit = 1.0 / (1.0 - 2.0 * 0.3) ** 2
    assert exact_before < exact_now < limit
