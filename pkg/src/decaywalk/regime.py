"""Phase map of the walk's long-time behavior over the (alpha, gamma) plane.

For fixed memory parameter alpha, the decayed walk switches from divergence
to almost-sure convergence at the critical decay exponent
``gamma_c(alpha) = max(alpha, 1/2)``.  Below the critical line the mode of
divergence depends on alpha: oscillation (liminf = -inf, limsup = +inf) for
alpha <= 1/2, monotone divergence to a random sign of infinity for
alpha > 1/2.  Two measure-zero curves are excluded from the sharp statements
and are reported as their own label rather than guessed at:

* ``gamma_0(alpha) = max(alpha, -alpha/(1-2alpha))`` for alpha < 1/2, where
  the two-sided envelope estimate for the oscillation degenerates;
* the superdiffusive fluctuation curve for alpha > 1/2, the positive root of
  ``(2alpha-1) g^2 + 2 alpha^2 g - alpha^2 = 0`` (equivalently
  ``g sqrt(2alpha-1) = alpha sqrt(1-2g)``), where the fluctuation lower
  bound around the random drift degenerates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .params import OutOfRangeError, NonPositiveGammaError


class RegimeKind(enum.Enum):
    OSCILLATORY = "oscillatory"
    DIVERGES_MONOTONE = "diverges_monotone"
    CONVERGENT = "convergent"
    ON_CRITICAL_LINE = "on_critical_line"
    ON_EXCLUDED_CURVE = "on_excluded_curve"


@dataclass(frozen=True)
class ScalingLaw:
    """Leading-order growth descriptor: n^a * (log n)^b * (log log n)^c.

    ``clt_variance`` is the limiting variance when a CLT normalization is
    known at this scale; ``drift_coefficient`` multiplies the almost-sure
    random drift limit L where one exists.
    """

    n_exponent: float = 0.0
    log_exponent: float = 0.0
    loglog_exponent: float = 0.0
    clt_variance: Optional[float] = None
    drift_coefficient: Optional[float] = None
    description: str = ""


@dataclass(frozen=True)
class RegimeLabel:
    kind: RegimeKind
    curve: Optional[str] = None  # set only for ON_EXCLUDED_CURVE / ON_CRITICAL_LINE
    scaling: Optional[ScalingLaw] = None

    def __post_init__(self):
        if self.kind is RegimeKind.CONVERGENT and self.scaling is not None:
            raise ValueError("convergent labels carry no growth scaling")


def gamma_c(alpha: float) -> float:
    """Critical decay exponent separating divergence from localization."""
    _check_alpha(alpha)
    return max(alpha, 0.5)


def gamma_0(alpha: float) -> float:
    """Degenerate envelope curve in the oscillatory region, alpha < 1/2."""
    _check_alpha(alpha)
    if alpha >= 0.5:
        raise ValueError("gamma_0 is defined for alpha < 1/2")
    return max(alpha, -alpha / (1.0 - 2.0 * alpha))


def gamma_0_quadratic(alpha: float) -> float:
    """gamma_0 as the positive root of (1-2a) g^2 + 2 a^2 g - a^2 = 0.

    Dual form of :func:`gamma_0`; kept separate so tests can assert the two
    agree rather than trusting one derivation.
    """
    _check_alpha(alpha)
    if alpha >= 0.5:
        raise ValueError("gamma_0 is defined for alpha < 1/2")
    if alpha == 0.0:
        return 0.0
    # discriminant/4 = a^2 (1-a)^2, a perfect square
    root_pm = abs(alpha) * (1.0 - alpha)
    r1 = (-alpha * alpha + root_pm) / (1.0 - 2.0 * alpha)
    r2 = (-alpha * alpha - root_pm) / (1.0 - 2.0 * alpha)
    return max(r1, r2)


def excluded_superdiffusive_gamma(alpha: float) -> float:
    """Degenerate fluctuation curve for alpha > 1/2; lies in (0, 1/2).

    Positive root of (2a-1) g^2 + 2 a^2 g - a^2 = 0, i.e. the solution of
    g*sqrt(2a-1) = a*sqrt(1-2g).
    """
    _check_alpha(alpha)
    if alpha <= 0.5:
        raise ValueError("excluded superdiffusive curve needs alpha > 1/2")
    disc = alpha * alpha + 2.0 * alpha - 1.0
    return alpha * (math.sqrt(disc) - alpha) / (2.0 * alpha - 1.0)


def classify(alpha: float, gamma: float, eps: float = 1e-12) -> RegimeLabel:
    """Map (alpha, gamma) to its long-time behavior label.

    ``eps`` is the half-width of the detection collars around the critical
    line and the excluded curves; points inside a collar get the dedicated
    curve label instead of the surrounding region's.
    """
    _check_alpha(alpha)
    if not (gamma > 0.0):
        raise NonPositiveGammaError(gamma)
    if eps < 0.0:
        raise ValueError("eps must be >= 0")

    gc = gamma_c(alpha)
    if alpha < 0.5:
        g0 = gamma_0(alpha)
        if g0 > 0.0 and abs(gamma - g0) <= eps:
            return RegimeLabel(RegimeKind.ON_EXCLUDED_CURVE, curve="gamma_0")
    elif alpha > 0.5:
        ge = excluded_superdiffusive_gamma(alpha)
        if abs(gamma - ge) <= eps:
            return RegimeLabel(
                RegimeKind.ON_EXCLUDED_CURVE, curve="superdiffusive_fluctuation"
            )
    if abs(gamma - gc) <= eps:
        return RegimeLabel(
            RegimeKind.ON_CRITICAL_LINE,
            curve="gamma_c",
            scaling=_critical_scaling(alpha, gamma),
        )
    if gamma > gc:
        return RegimeLabel(RegimeKind.CONVERGENT)
    if alpha > 0.5:
        return RegimeLabel(
            RegimeKind.DIVERGES_MONOTONE,
            scaling=ScalingLaw(
                n_exponent=alpha - gamma,
                drift_coefficient=alpha / (alpha - gamma),
                description="random drift (alpha/(alpha-gamma)) * L * n^(alpha-gamma)",
            ),
        )
    if alpha == 0.5:
        return RegimeLabel(
            RegimeKind.OSCILLATORY,
            scaling=ScalingLaw(
                n_exponent=0.5 * (1.0 - 2.0 * gamma),
                log_exponent=0.5,
                clt_variance=1.0 / (1.0 - 2.0 * gamma) ** 2,
                description="CLT scale sqrt(n^(1-2*gamma) * log n)",
            ),
        )
    return RegimeLabel(
        RegimeKind.OSCILLATORY,
        scaling=ScalingLaw(
            n_exponent=0.5 * (1.0 - 2.0 * gamma),
            loglog_exponent=0.5,
            description="envelope sqrt(n^(1-2*gamma) * log log n)",
        ),
    )


def _critical_scaling(alpha: float, gamma: float) -> Optional[ScalingLaw]:
    if alpha > 0.5:
        # gamma = alpha: logarithmic drift alpha * L * log n
        return ScalingLaw(
            log_exponent=1.0,
            drift_coefficient=alpha,
            description="random drift alpha * L * log n",
        )
    if alpha < 0.5:
        # gamma = 1/2: CLT at scale sqrt(log n)
        return ScalingLaw(
            log_exponent=0.5,
            clt_variance=1.0 / (1.0 - 2.0 * alpha) ** 2,
            description="CLT scale sqrt(log n)",
        )
    return None  # alpha = gamma_c = 1/2: no sharp scale known here


def phase_grid(
    alphas: np.ndarray, gammas: np.ndarray, eps: float = 1e-9
) -> list[list[RegimeLabel]]:
    """Classify every point of the outer product grid; rows follow alphas."""
    return [[classify(float(a), float(g), eps) for g in gammas] for a in alphas]


def _check_alpha(alpha: float) -> None:
    if not (-1.0 <= alpha <= 1.0):
        raise OutOfRangeError("alpha", alpha, -1.0, 1.0)
