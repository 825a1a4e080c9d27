"""Acceptance criteria, one test per criterion.

Each test executes the corresponding check from decaywalk.verify at its
pinned tolerance and prints its PASS/FAIL line (visible with ``pytest -s``
or in the failure output).

Criterion 6 is a known red: it compares a Monte Carlo estimate at the pinned
horizon n = 1e6 against the asymptotic constant 4 with a +-20% band, but the
exact finite-n value (computable in closed recursion, no sampling involved)
is 3.1845, already 20.4% below the constant.  The check is implemented
exactly as stated and marked as a strict expected failure; see
notes/decisions.md for the analysis.
"""

import pytest

from decaywalk import verify


def _run(criterion_fn):
    result = criterion_fn()
    print(result.line())
    return result


def test_criterion_01_oracle_equivalence():
    assert _run(verify.criterion_1).passed


def test_criterion_02_mean_law_via_distribution():
    assert _run(verify.criterion_2).passed


def test_criterion_03_second_moment_asymptotics():
    assert _run(verify.criterion_3).passed


def test_criterion_04_diffusive_clt():
    assert _run(verify.criterion_4).passed


def test_criterion_05_variance_scaling():
    assert _run(verify.criterion_5).passed


@pytest.mark.xfail(
    strict=True,
    reason="exact finite-n standardized variance is 3.1845 at n=1e6, 20.4% below "
    "the asymptotic constant 4; the stated +-20% band cannot hold in expectation",
)
def test_criterion_06_critical_memory_clt():
    assert _run(verify.criterion_6).passed


def test_criterion_07_drift_coupling():
    assert _run(verify.criterion_7).passed


def test_criterion_08_remainder_bound():
    assert _run(verify.criterion_8).passed


def test_criterion_09_limit_mean_series_vs_mc():
    assert _run(verify.criterion_9).passed


def test_criterion_10_phase_diagram():
    assert _run(verify.criterion_10).passed


def test_criterion_11_oscillation_census():
    assert _run(verify.criterion_11).passed


def test_criterion_12_regime_curves():
    assert _run(verify.criterion_12).passed
