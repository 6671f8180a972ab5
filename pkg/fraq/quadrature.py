"""Gauss-Jacobi quadrature rules.

Rules integrate against the weight (1 - s)^a (1 + s)^b on [-1, 1]. Nodes are
the eigenvalues of the symmetric Jacobi matrix (Golub-Welsch), polished with
one Newton step on the Jacobi polynomial.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eig_banded
from scipy.special import beta as beta_fn
from scipy.special import eval_jacobi

from .errors import ParameterError
from .logger import logger

MAX_POINTS = 256

# Newton updates larger than this mean the eigen-solve was already off; keep it.
_NEWTON_ACCEPT = 1e-8


@dataclass(frozen=True)
class JacobiRule:
    """Nodes and weights for the weight function (1 - s)^a (1 + s)^b."""

    exponent_a: float
    exponent_b: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n_points(self) -> int:
        return len(self.nodes)

    def integrate(self, values: np.ndarray) -> float:
        """Apply the rule to samples of the integrand at the nodes."""
        return float(np.dot(self.weights, values))


def _check_exponents(exponent_a: float, exponent_b: float) -> None:
    if not (np.isfinite(exponent_a) and np.isfinite(exponent_b)):
        raise ParameterError("Jacobi exponents must be finite")
    if exponent_a <= -1 or exponent_b <= -1:
        raise ParameterError(
            f"Jacobi exponents must exceed -1, got a={exponent_a}, b={exponent_b}"
        )


def zeroth_moment(exponent_a: float, exponent_b: float) -> float:
    """Integral of the weight function, 2^(a+b+1) B(a+1, b+1)."""
    return float(
        2.0 ** (exponent_a + exponent_b + 1) * beta_fn(exponent_a + 1, exponent_b + 1)
    )


def _recurrence(a: float, b: float, n: int):
    """
    Three-term recurrence coefficients of the monic Jacobi polynomials.

    Returns:
        (diagonal, off_diagonal_squared), each of length n; off_diagonal_squared[0]
        is unused by the eigen-solve.
    """
    k = np.arange(n, dtype=float)
    ab = a + b
    diag = np.empty(n)
    diag[0] = (b - a) / (ab + 2)
    if n > 1:
        kk = k[1:]
        diag[1:] = (b * b - a * a) / ((2 * kk + ab) * (2 * kk + ab + 2))

    off = np.zeros(n)
    if n > 1:
        # k = 1 written without the removable singularity at a + b = -1
        off[1] = 4 * (1 + a) * (1 + b) / ((2 + ab) ** 2 * (3 + ab))
    if n > 2:
        kk = k[2:]
        off[2:] = (
            4 * kk * (kk + a) * (kk + b) * (kk + ab)
            / ((2 * kk + ab) ** 2 * (2 * kk + ab + 1) * (2 * kk + ab - 1))
        )
    return diag, off


def _newton_polish(nodes: np.ndarray, a: float, b: float) -> np.ndarray:
    n = len(nodes)
    value = eval_jacobi(n, a, b, nodes)
    if n == 1:
        slope = np.full_like(nodes, (n + a + b + 1) / 2)
    else:
        slope = (n + a + b + 1) / 2 * eval_jacobi(n - 1, a + 1, b + 1, nodes)

    with np.errstate(divide="ignore", invalid="ignore"):
        step = value / slope
    candidate = nodes - step
    accept = (
        np.isfinite(step)
        & (np.abs(step) < _NEWTON_ACCEPT)
        & (candidate > -1)
        & (candidate < 1)
    )
    polished = np.where(accept, candidate, nodes)
    if n > 1 and np.any(np.diff(polished) <= 0):
        return nodes
    return polished


@lru_cache(maxsize=64)
def _cached_rule(exponent_a: float, exponent_b: float, n_points: int) -> JacobiRule:
    diag, off = _recurrence(exponent_a, exponent_b, n_points)
    a_band = np.vstack((np.sqrt(off), diag))
    eigenvalues, vectors = eig_banded(a_band)

    order = np.argsort(eigenvalues)
    nodes = eigenvalues[order]
    weights = zeroth_moment(exponent_a, exponent_b) * vectors[0, order] ** 2

    nodes = _newton_polish(nodes, exponent_a, exponent_b)

    nodes.setflags(write=False)
    weights.setflags(write=False)
    logger.debug(
        "Gauss-Jacobi rule a=%.6g b=%.6g n=%d built", exponent_a, exponent_b, n_points
    )
    return JacobiRule(float(exponent_a), float(exponent_b), nodes, weights)


def gauss_jacobi(exponent_a: float, exponent_b: float, n_points: int) -> JacobiRule:
    """
    Build the n-point Gauss-Jacobi rule.

    Args:
        exponent_a: Exponent on (1 - s), > -1
        exponent_b: Exponent on (1 + s), > -1
        n_points: Number of nodes, 1..MAX_POINTS

    Returns:
        JacobiRule with strictly increasing nodes in (-1, 1) and positive weights,
        exact for polynomials of degree <= 2 * n_points - 1

    Raises:
        ParameterError: If an exponent is <= -1 or n_points is out of range
    """
    _check_exponents(exponent_a, exponent_b)
    if isinstance(n_points, bool) or int(n_points) != n_points:
        raise ParameterError(f"n_points must be an integer, got {n_points!r}")
    n_points = int(n_points)
    if n_points < 1 or n_points > MAX_POINTS:
        raise ParameterError(f"n_points must be in 1..{MAX_POINTS}, got {n_points}")
    return _cached_rule(float(exponent_a), float(exponent_b), n_points)


def jacobi_moment(exponent_a: float, exponent_b: float, k: int) -> float:
    """
    Exact moment of s^k against (1 - s)^a (1 + s)^b on [-1, 1].

    Uses M_0 = 2^(a+b+1) B(a+1, b+1), M_1 = (b - a) M_0 / (a + b + 2) and
    (a + b + j + 2) M_(j+1) = (b - a) M_j + j M_(j-1), which follows from
    integrating the derivative of (1 - s)^(a+1) (1 + s)^(b+1) s^j.

    Args:
        exponent_a: Exponent on (1 - s), > -1
        exponent_b: Exponent on (1 + s), > -1
        k: Nonnegative power

    Returns:
        The moment as a float
    """
    _check_exponents(exponent_a, exponent_b)
    if k < 0:
        raise ParameterError(f"Moment order must be nonnegative, got {k}")
    a, b = float(exponent_a), float(exponent_b)
    previous = 0.0
    current = zeroth_moment(a, b)
    for j in range(k):
        previous, current = current, ((b - a) * current + j * previous) / (a + b + j + 2)
    return current
