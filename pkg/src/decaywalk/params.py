"""Model parameters for the memory walk with decaying step sizes.

The walk is driven by three numbers: the memory parameter ``alpha`` (the
probability of copying a uniformly chosen past step is ``p = (1+alpha)/2``),
the first-step bias ``beta`` (the first step is +1 with probability
``q = (1+beta)/2``), and the step-decay exponent ``gamma`` (the step at time
``k`` has size ``k**-gamma``).
"""

from __future__ import annotations

from dataclasses import dataclass


class ParameterError(ValueError):
    """Base class for invalid model parameters."""


class OutOfRangeError(ParameterError):
    """A parameter lies outside its admissible interval."""

    def __init__(self, name: str, value: float, low: float, high: float):
        self.name = name
        self.value = value
        super().__init__(f"{name}={value!r} outside [{low}, {high}]")


class NonPositiveGammaError(ParameterError):
    """The decay exponent must be strictly positive."""

    def __init__(self, value: float):
        self.value = value
        super().__init__(f"gamma={value!r} must be > 0")


@dataclass(frozen=True)
class ModelParams:
    """Validated parameter triple (alpha, beta, gamma).

    alpha: memory parameter in [-1, 1]; alpha = 2p - 1.
    beta:  first-step bias in [-1, 1]; beta = 2q - 1.
    gamma: step-decay exponent, > 0.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        # NaN fails every comparison, so it lands in the range errors too.
        if not (-1.0 <= self.alpha <= 1.0):
            raise OutOfRangeError("alpha", self.alpha, -1.0, 1.0)
        if not (-1.0 <= self.beta <= 1.0):
            raise OutOfRangeError("beta", self.beta, -1.0, 1.0)
        if not (self.gamma > 0.0):
            raise NonPositiveGammaError(self.gamma)

    @property
    def p(self) -> float:
        """Probability of copying (rather than flipping) a remembered step."""
        return 0.5 * (1.0 + self.alpha)

    @property
    def q(self) -> float:
        """Probability that the first step is +1."""
        return 0.5 * (1.0 + self.beta)


def validate_params(alpha: float, beta: float, gamma: float) -> ModelParams:
    """Validate raw values and return a ModelParams, raising on violation."""
    return ModelParams(float(alpha), float(beta), float(gamma))
