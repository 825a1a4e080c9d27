"""Regime-verification experiments on top of the ensemble machinery.

Each experiment turns one of the walk's limit theorems into a finite-n
statistic: variance-scaling slopes, drift coupling in the superdiffusive
regime, oscillation (sign-change) censuses, and standardized CLT moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats as sstats

from .ensemble import geometric_checkpoints, run_ensemble, simulate_ensemble
from .exact import moment_table
from .params import ModelParams


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares slope of log Var(S_n) against log n."""

    slope: float
    intercept: float
    rms_residual: float
    checkpoints: np.ndarray
    variances: np.ndarray


@dataclass(frozen=True)
class DriftCoupling:
    """Cross-trial coupling of S_n/n^(alpha-gamma) to its predicted drift."""

    correlation: float
    degenerate: bool
    scaled_S: np.ndarray
    predicted: np.ndarray


@dataclass(frozen=True)
class OscillationCensus:
    """Per-trial counts of strict sign changes of S in (after, n_max]."""

    counts: np.ndarray
    median: float
    fraction_zero: float


@dataclass(frozen=True)
class CltMoments:
    variance: float
    skewness: float
    excess_kurtosis: float
    scale: float


def variance_scaling_fit(
    params: ModelParams,
    checkpoints: Optional[Sequence[int]] = None,
    source: str = "exact",
    trials: int = 2000,
    seed: int = 0,
) -> ScalingFit:
    """Fit Var(S_n) ~ C n^slope over geometric checkpoints (default 1e3..1e6).

    ``source="exact"`` uses the O(n) moment sweep; ``source="mc"`` estimates
    the variances from an ensemble.
    """
    if checkpoints is None:
        checkpoints = geometric_checkpoints(10**6, count=12, start=10**3)
    cps = np.asarray(list(checkpoints), dtype=np.int64)
    if source == "exact":
        var = moment_table(params, cps).var_S
    elif source == "mc":
        result = run_ensemble(params, int(cps[-1]), trials, checkpoints=cps, seed=seed)
        var = np.array([st.variance for st in result.stats["S"]])
    else:
        raise ValueError("source must be 'exact' or 'mc'")
    if np.any(var <= 0.0):
        raise ValueError("variance must be positive for a log-log fit")
    logn = np.log(cps.astype(np.float64))
    logv = np.log(var)
    slope, intercept = np.polyfit(logn, logv, 1)
    resid = logv - (slope * logn + intercept)
    return ScalingFit(
        slope=float(slope),
        intercept=float(intercept),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        checkpoints=cps,
        variances=var,
    )


def drift_coupling(
    params: ModelParams, n_probe: int, trials: int, seed: int = 0
) -> DriftCoupling:
    """Pearson correlation of S_n/n^(a-g) with (a/(a-g)) T_n/n^a across trials.

    Meaningful in the superdiffusive drift regime alpha > 1/2, gamma < alpha,
    where both statistics converge to the same multiple of the random drift
    limit.  Degenerate (zero-variance) cases are flagged instead of fitted.
    """
    a, g = params.alpha, params.gamma
    if not (a > 0.5 and g < a):
        raise ValueError("drift coupling needs alpha > 1/2 and gamma < alpha")
    arrays = simulate_ensemble(params, n_probe, trials, checkpoints=[n_probe], seed=seed)
    scaled_S = arrays.S[:, 0] / float(n_probe) ** (a - g)
    predicted = (a / (a - g)) * arrays.T[:, 0] / float(n_probe) ** a
    if np.std(scaled_S) < 1e-12 or np.std(predicted) < 1e-12:
        return DriftCoupling(
            correlation=float("nan"), degenerate=True,
            scaled_S=scaled_S, predicted=predicted,
        )
    corr = float(np.corrcoef(scaled_S, predicted)[0, 1])
    return DriftCoupling(
        correlation=corr, degenerate=False, scaled_S=scaled_S, predicted=predicted
    )


def oscillation_census(
    params: ModelParams,
    n_max: int,
    trials: int,
    seed: int = 0,
    after: int = 0,
) -> OscillationCensus:
    """Count strict sign changes (S_{k-1} S_k < 0) per trial in (after, n_max]."""
    cps = [n_max] if after < 1 else [after, n_max]
    arrays = simulate_ensemble(params, n_max, trials, checkpoints=cps, seed=seed)
    if after < 1:
        counts = arrays.sign_changes[:, 0].copy()
    else:
        counts = arrays.sign_changes[:, 1] - arrays.sign_changes[:, 0]
    return OscillationCensus(
        counts=counts,
        median=float(np.median(counts)),
        fraction_zero=float(np.mean(counts == 0)),
    )


def clt_scale(params: ModelParams, n: int, statistic: str) -> float:
    """Normalization for the regime's CLT; raises where none is stated."""
    a, g = params.alpha, params.gamma
    if statistic == "T":
        if a < 0.5:
            return math.sqrt(n)
        if a == 0.5:
            return math.sqrt(n * math.log(n))
        raise ValueError("no Gaussian limit for T_n/scale when alpha > 1/2")
    if statistic == "S":
        if a < 0.5 and g == 0.5:
            return math.sqrt(math.log(n))
        if a == 0.5 and g < 0.5:
            return math.sqrt(n ** (1.0 - 2.0 * g) * math.log(n))
        raise ValueError(
            "CLT for S_n is available at gamma = 1/2 (alpha < 1/2) "
            "or alpha = 1/2 (gamma < 1/2)"
        )
    raise ValueError("statistic must be 'T' or 'S'")


def clt_moments(
    params: ModelParams,
    n: int,
    trials: int,
    statistic: str = "T",
    seed: int = 0,
) -> CltMoments:
    """Sample variance/skewness/excess kurtosis of the standardized statistic."""
    scale = clt_scale(params, n, statistic)
    arrays = simulate_ensemble(params, n, trials, checkpoints=[n], seed=seed)
    raw = arrays.T[:, 0] if statistic == "T" else arrays.S[:, 0]
    z = raw / scale
    return CltMoments(
        variance=float(np.var(z, ddof=1)),
        skewness=float(sstats.skew(z)),
        excess_kurtosis=float(sstats.kurtosis(z, fisher=True)),
        scale=scale,
    )
