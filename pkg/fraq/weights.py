"""Classical convolution-quadrature weights.

The weights d_i are the power-series coefficients of delta(zeta)^alpha with

    BE:  delta(zeta) = (1 - zeta) / tau
    SBD: delta(zeta) = ((1 - zeta) + (1 - zeta)^2 / 2) / tau
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterError, SingularParameterError


class Scheme(str, Enum):
    """Generating function of the convolution quadrature."""

    BE = "be"
    SBD = "sbd"


@dataclass(frozen=True)
class WeightTable:
    """Weights d_0..d_n_max for one (scheme, alpha, tau)."""

    scheme: Scheme
    alpha: float
    tau: float
    weights: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.weights) - 1

    def __getitem__(self, i):
        return self.weights[i]

    def __len__(self) -> int:
        return len(self.weights)


def _check(alpha: float, tau: float, n_max: int) -> None:
    if not (0 < alpha <= 1):
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha}")
    if not (tau > 0 and np.isfinite(tau)):
        raise ParameterError(f"tau must be positive, got {tau}")
    if n_max < 0:
        raise ParameterError(f"n_max must be nonnegative, got {n_max}")


def binomial_series(alpha: float, n_max: int, ratio: float = 1.0) -> np.ndarray:
    """
    Coefficients of (1 - ratio * zeta)^alpha up to zeta^n_max.

    Args:
        alpha: Power
        n_max: Highest coefficient index
        ratio: Scale of zeta

    Returns:
        Array of length n_max + 1
    """
    i = np.arange(1, n_max + 1, dtype=float)
    factors = (i - 1 - alpha) / i * ratio
    return np.concatenate(([1.0], np.cumprod(factors)))


def _frozen(scheme: Scheme, alpha: float, tau: float, weights: np.ndarray) -> WeightTable:
    weights.setflags(write=False)
    return WeightTable(scheme, float(alpha), float(tau), weights)


def be_weights(alpha: float, tau: float, n_max: int) -> WeightTable:
    """
    Backward-Euler CQ weights.

    d_0 = tau^-alpha, d_i = d_(i-1) (i - 1 - alpha) / i.

    Args:
        alpha: Order of the derivative, in (0, 1]
        tau: Time step
        n_max: Highest weight index

    Returns:
        WeightTable of length n_max + 1
    """
    _check(alpha, tau, n_max)
    weights = tau ** (-alpha) * binomial_series(alpha, n_max)
    return _frozen(Scheme.BE, alpha, tau, weights)


def sbd_weights(alpha: float, tau: float, n_max: int) -> WeightTable:
    """
    Second-order backward difference CQ weights.

    Uses (1 - zeta) + (1 - zeta)^2 / 2 = (3/2)(1 - zeta)(1 - zeta/3), so the
    weights are (3 / (2 tau))^alpha times the convolution of two binomial series.

    Args:
        alpha: Order of the derivative, in (0, 1]
        tau: Time step
        n_max: Highest weight index

    Returns:
        WeightTable of length n_max + 1
    """
    _check(alpha, tau, n_max)
    first = binomial_series(alpha, n_max)
    second = binomial_series(alpha, n_max, ratio=1.0 / 3.0)
    series = np.convolve(first, second)[: n_max + 1]
    weights = (1.5 / tau) ** alpha * series
    return _frozen(Scheme.SBD, alpha, tau, weights)


WEIGHT_FUNCTIONS = {
    Scheme.BE: be_weights,
    Scheme.SBD: sbd_weights,
}


def weight_table(scheme, alpha: float, tau: float, n_max: int) -> WeightTable:
    """
    Weights for a scheme given by enum or name ("be", "sbd").

    Raises:
        ParameterError: If the scheme is unknown
    """
    try:
        key = Scheme(scheme)
    except ValueError as e:
        raise ParameterError(f"Unknown CQ scheme {scheme!r}") from e
    return WEIGHT_FUNCTIONS[key](alpha, tau, n_max)


def coupling_from_transition(m: float) -> float:
    """
    Coupling constant a = (1 - m) / (2m - 1) of the two-state system.

    Args:
        m: Diagonal entry of the symmetric Markov transition matrix, in (0, 1]

    Returns:
        The coupling constant

    Raises:
        SingularParameterError: If m == 1/2
        ParameterError: If m lies outside (0, 1]
    """
    if m == 0.5:
        raise SingularParameterError("m = 1/2 makes the transition matrix singular")
    if not (0 < m <= 1):
        raise ParameterError(f"m must lie in (0, 1], got {m}")
    return (1 - m) / (2 * m - 1)
