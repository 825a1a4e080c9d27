"""Acceptance suite: every shipped claim checked at its stated tolerance.

Each criterion function runs one self-contained check and returns a
:class:`CheckResult`; ``run_acceptance`` runs them all (or the quick
deterministic subset) and is shared by the CLI ``verify`` subcommand and the
pytest acceptance module.

Conventions, fixed up front: criterion i uses master seed i for any Monte
Carlo it performs, and all tolerances are literals in this file.

Known red: criterion 6 probes an asymptotic CLT constant (4) at a pinned
finite horizon n = 1e6 where the *exact* standardized variance is 3.1845,
i.e. 20.4% below the constant, just outside the stated +-20% band.  The
check is implemented exactly as stated and is expected to fail; the detail
string carries the exact finite-n value so the (non-random) cause is
visible.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import decomposition as dec
from . import exact
from . import experiments as xp
from .ensemble import run_ensemble, simulate_ensemble
from .enumeration import enumerate_paths
from .params import ModelParams, validate_params
from .regime import (
    RegimeKind,
    classify,
    excluded_superdiffusive_gamma,
    gamma_0,
    gamma_0_quadratic,
)

ALPHA_GRID = (-1.0, -0.5, 0.0, 0.4, 0.5, 0.75, 1.0)
BETA_GRID = (-1.0, 0.2, 1.0)
GAMMA_GRID = (0.25, 0.5, 1.0, 1.5)

QUICK_CRITERIA = (1, 2, 10, 12)


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.criterion:2d} [{self.seconds:7.2f}s] {self.name}: {self.detail}"


def _timed(criterion, name, fn) -> CheckResult:
    t0 = time.perf_counter()
    passed, detail = fn()
    return CheckResult(criterion, name, passed, detail, time.perf_counter() - t0)


def criterion_1() -> CheckResult:
    """Exact engine vs 2^n brute-force enumeration on the parameter grid."""

    def run():
        tol = 1e-10
        n = 14
        worst = 0.0
        for a in ALPHA_GRID:
            for b in BETA_GRID:
                for g in GAMMA_GRID:
                    params = validate_params(a, b, g)
                    prof = enumerate_paths(params, n).moment_profile()
                    table = exact.moment_table(params, range(1, n + 1))
                    for key, col in (
                        ("mean_T", table.mean_T),
                        ("m2_T", table.m2_T),
                        ("mean_S", table.mean_S),
                        ("m2_S", table.m2_S),
                    ):
                        worst = max(worst, float(np.max(np.abs(prof[key] - col))))
        grid = len(ALPHA_GRID) * len(BETA_GRID) * len(GAMMA_GRID)
        return worst <= tol, f"worst |exact - enumeration| = {worst:.2e} over {grid} triples, n <= {n} (tol {tol})"

    res = _timed(1, "oracle equivalence (moments vs enumeration)", run)
    if res.seconds >= 60.0:
        res.passed = False
        res.detail += f"; runtime {res.seconds:.1f}s exceeded 60s"
    return res


def criterion_2() -> CheckResult:
    """DP law of T_n reproduces the mean beta * a_n for every n <= 200."""

    def run():
        tol = 1e-12
        n = 200
        worst = 0.0
        for a in ALPHA_GRID:
            factors = exact.gamma_factors(a, n)
            for b in BETA_GRID:
                params = validate_params(a, b, 1.0)
                means, _ = exact.t_distribution_moment_profile(params, n)
                expected = b * factors[1:]
                worst = max(worst, float(np.max(np.abs(means - expected))))
        return worst <= tol, f"worst |DP mean - beta*a_n| = {worst:.2e}, n <= {n} (tol {tol})"

    return _timed(2, "mean law E[T_n] = beta * a_n via exact distribution", run)


def criterion_3() -> CheckResult:
    """Second-moment recursion matches its leading-order asymptotics at n = 1e6."""

    def run():
        n = 10**6
        tols = {0.0: 0.02, 0.2: 0.02, 0.75: 0.02, 0.5: 0.05}
        details = []
        ok = True
        for a, tol in tols.items():
            params = validate_params(a, 0.0, 1.0)
            ratio = exact.second_moment_T(params, n) / exact.asymptotic_m2_T(a, n)
            ok &= abs(ratio - 1.0) <= tol
            details.append(f"alpha={a}: ratio={ratio:.4f} (tol {tol})")
        return ok, "; ".join(details)

    res = _timed(3, "mean-square displacement asymptotics", run)
    if res.seconds >= 10.0:
        res.passed = False
        res.detail += f"; runtime {res.seconds:.1f}s exceeded 10s"
    return res


def criterion_4() -> CheckResult:
    """Diffusive CLT for T_n: variance 1/(1-2a), Gaussian shape moments."""

    def run():
        params = validate_params(0.2, 0.0, 1.0)
        m = xp.clt_moments(params, n=10**4, trials=10**5, statistic="T", seed=4)
        target = 1.0 / (1.0 - 2.0 * 0.2)
        ok = (
            abs(m.variance / target - 1.0) <= 0.05
            and abs(m.skewness) < 0.05
            and abs(m.excess_kurtosis) < 0.1
        )
        return ok, (
            f"var={m.variance:.4f} vs {target:.4f} (+-5%), "
            f"skew={m.skewness:+.4f} (<0.05), exkurt={m.excess_kurtosis:+.4f} (<0.1)"
        )

    return _timed(4, "CLT of T_n/sqrt(n) at alpha = 0.2", run)


def criterion_5() -> CheckResult:
    """Var(S_n) scales like n^(1-2*gamma) below the critical line."""

    def run():
        cases = ((0.0, 0.25), (0.3, 0.25), (-0.5, 0.3))
        details = []
        ok = True
        for a, g in cases:
            fit = xp.variance_scaling_fit(validate_params(a, 0.0, g))
            target = 1.0 - 2.0 * g
            ok &= abs(fit.slope - target) <= 0.05
            details.append(f"({a},{g}): slope={fit.slope:.4f} vs {target} (+-0.05)")
        return ok, "; ".join(details)

    return _timed(5, "variance scaling slope (exact engine, n in [1e3, 1e6])", run)


def criterion_6() -> CheckResult:
    """Critical-memory CLT constant at the pinned horizon (known red)."""

    def run():
        a, g, n = 0.5, 0.25, 10**6
        params = validate_params(a, 0.0, g)
        exact_var = float(
            exact.moment_table(params, [n]).var_S[0] / (n ** (1.0 - 2.0 * g) * math.log(n))
        )
        m = xp.clt_moments(params, n=n, trials=10**4, statistic="S", seed=6)
        target = 1.0 / (1.0 - 2.0 * g) ** 2
        ok = abs(m.variance / target - 1.0) <= 0.20
        return ok, (
            f"MC var={m.variance:.4f} vs asymptotic {target} (+-20% -> [3.2, 4.8]); "
            f"exact finite-n value {exact_var:.4f} already deviates "
            f"{abs(exact_var / target - 1) * 100:.1f}% at n={n}"
        )

    return _timed(6, "CLT of S_n/sqrt(n^(1-2g) log n) at alpha = 1/2", run)


def criterion_7() -> CheckResult:
    """Superdiffusive drift: S_n couples to (a/(a-g)) T_n/n^a across trials."""

    def run():
        params = validate_params(0.8, 0.0, 0.3)
        c = xp.drift_coupling(params, n_probe=10**5, trials=10**3, seed=7)
        return (not c.degenerate) and c.correlation > 0.99, (
            f"corr(S_n/n^(a-g), (a/(a-g)) T_n/n^a) = {c.correlation:.5f} (> 0.99)"
        )

    return _timed(7, "superdiffusive drift coupling", run)


def criterion_8() -> CheckResult:
    """Remainder bound |R_n| <= |beta| + (3+sigma1)|alpha| on every path."""

    def run():
        triples = (
            (0.6, 0.4, 0.8),
            (-0.5, 0.3, 0.6),
            (0.9, -0.2, 0.35),
            (0.25, 1.0, 1.0),
            (-1.0, 0.7, 0.5),
        )
        details = []
        ok = True
        for a, b, g in triples:
            params = validate_params(a, b, g)
            arr = simulate_ensemble(
                params, 10**5, 10**3, checkpoints=[10**5], seed=8,
                include_decomposition=True,
            )
            bound = dec.remainder_bound(params)
            max_r = float(arr.max_abs_R.max())
            gap = float(arr.max_resid_gap.max())
            ok &= max_r <= bound and gap <= 1e-9
            details.append(f"({a},{b},{g}): max|R|={max_r:.3f}<= {bound:.3f}, gap={gap:.1e}")
        return ok, "; ".join(details)

    return _timed(8, "remainder bound and residual identity (1e3 paths to 1e5)", run)


def criterion_9() -> CheckResult:
    """Series value of E[S_inf] agrees with the MC mean of S_n."""

    def run():
        params = validate_params(0.25, 1.0, 1.0)
        limit, terms = exact.limit_mean_S(params, tol=1e-6)
        res = run_ensemble(params, 10**5, 10**4, checkpoints=[10**5], seed=9)
        st = res.stats["S"][0]
        z = abs(st.mean - limit) / st.stderr
        return z <= 3.0, (
            f"series={limit:.6f} ({terms} terms), MC mean={st.mean:.6f} "
            f"+- {st.stderr:.6f}, |z| = {z:.2f} (<= 3)"
        )

    return _timed(9, "E[S_inf] series vs Monte Carlo", run)


def criterion_10() -> CheckResult:
    """Phase diagram: five-region partition and exact spot labels."""

    def run():
        alphas = np.linspace(-1.0, 1.0, 101)
        gammas = np.linspace(0.015, 1.515, 101)
        eps = 1e-9
        counts: dict[RegimeKind, int] = {}
        mismatches = 0
        for a in alphas:
            prev_convergent = False
            for g in gammas:
                lab = classify(float(a), float(g), eps)
                counts[lab.kind] = counts.get(lab.kind, 0) + 1
                if lab.kind != _expected_kind(float(a), float(g), eps):
                    mismatches += 1
                # monotonicity: once past the critical line, stay convergent
                if prev_convergent and lab.kind is not RegimeKind.CONVERGENT:
                    mismatches += 1
                prev_convergent = lab.kind is RegimeKind.CONVERGENT
        spots = (
            (0.0, 0.3, RegimeKind.OSCILLATORY),
            (0.8, 0.5, RegimeKind.DIVERGES_MONOTONE),
            (0.8, 0.9, RegimeKind.CONVERGENT),
            (0.0, 0.6, RegimeKind.CONVERGENT),
        )
        spot_ok = all(classify(a, g).kind is k for a, g, k in spots)
        total = sum(counts.values())
        ok = (
            mismatches == 0
            and spot_ok
            and total == 101 * 101
            and len(counts) == 5
        )
        summary = ", ".join(f"{k.value}={v}" for k, v in sorted(counts.items(), key=lambda i: i[0].value))
        return ok, f"{summary}; mismatches={mismatches}; spot values ok={spot_ok}"

    return _timed(10, "phase diagram partition (101 x 101 grid)", run)


def _expected_kind(a: float, g: float, eps: float) -> RegimeKind:
    """Independent region logic: direct inequalities, collars checked last."""
    if a < 0.5:
        g0 = max(a, -a / (1.0 - 2.0 * a))
        if g0 > 0.0 and abs(g - g0) <= eps:
            return RegimeKind.ON_EXCLUDED_CURVE
    if a > 0.5:
        disc = math.sqrt(a * a + 2.0 * a - 1.0)
        if abs(g - a * (disc - a) / (2.0 * a - 1.0)) <= eps:
            return RegimeKind.ON_EXCLUDED_CURVE
    if abs(g - max(a, 0.5)) <= eps:
        return RegimeKind.ON_CRITICAL_LINE
    if g > max(a, 0.5):
        return RegimeKind.CONVERGENT
    if a > 0.5:
        return RegimeKind.DIVERGES_MONOTONE
    return RegimeKind.OSCILLATORY


def criterion_11() -> CheckResult:
    """Sign-change proxies for the oscillation/divergence dichotomy."""

    def run():
        osc = validate_params(0.0, 0.0, 0.25)
        c_small = xp.oscillation_census(osc, 10**4, 500, seed=11)
        c_large = xp.oscillation_census(osc, 10**5, 500, seed=11)
        div = validate_params(0.8, 0.0, 0.5)
        c_div = xp.oscillation_census(div, 10**4, 1000, seed=11, after=10**3)
        ok = c_large.median > c_small.median and c_div.fraction_zero >= 0.95
        return ok, (
            f"oscillatory medians {c_small.median:.0f} -> {c_large.median:.0f} "
            f"(strictly up); divergent zero-crossing fraction after 1e3 = "
            f"{c_div.fraction_zero:.3f} (>= 0.95)"
        )

    return _timed(11, "oscillation census (LIL desk-scale substitute)", run)


def criterion_12() -> CheckResult:
    """Self-consistency of the regime curves."""

    def run():
        tol = 1e-12
        dual = max(
            abs(gamma_0(float(a)) - gamma_0_quadratic(float(a)))
            for a in np.linspace(-1.0, 0.4999, 200)
        )
        worst_identity = 0.0
        in_range = True
        for a in (0.6, 0.75, 0.9, 1.0):
            g = excluded_superdiffusive_gamma(a)
            worst_identity = max(
                worst_identity,
                abs(g * math.sqrt(2 * a - 1) - a * math.sqrt(1 - 2 * g)),
            )
            in_range &= 0.0 < g < 0.5
        ok = dual <= tol and worst_identity <= tol and in_range
        return ok, (
            f"gamma_0 dual-form max diff = {dual:.2e}; excluded-curve identity "
            f"residual = {worst_identity:.2e} (tol {tol}); roots in (0, 1/2): {in_range}"
        )

    return _timed(12, "regime curve self-consistency", run)


ALL_CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
}


def run_acceptance(quick: bool = False) -> list[CheckResult]:
    """Run the acceptance checks (quick = deterministic oracle subset)."""
    numbers = QUICK_CRITERIA if quick else tuple(sorted(ALL_CRITERIA))
    return [ALL_CRITERIA[i]() for i in numbers]
