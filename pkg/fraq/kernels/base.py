"""Base interface for compressed CQ kernels."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from math import ceil, sqrt
from typing import Any, Callable, Dict, Optional, Tuple, TypeVar

import numpy as np

from ..errors import ParameterError
from ..logger import logger
from ..quadrature import MAX_POINTS
from ..weights import WEIGHT_FUNCTIONS, Scheme, WeightTable

# A rule on the ratios (s+1)/2 reproduces the weights to roundoff up to about
# N_p^2 / TAIL_RESOLUTION; past that the error grows quickly.
TAIL_RESOLUTION = 10

# indices per block in reconstruct
_CHUNK = 4096


@dataclass(frozen=True)
class GeometricFamily:
    """One sum of geometric sequences: weight i ~ sum_j multipliers_j ratios_j^(i - offset)."""

    multipliers: np.ndarray
    ratios: np.ndarray

    def __len__(self) -> int:
        return len(self.ratios)


@dataclass
class KernelErrorReport:
    """Per-weight errors of a compressed kernel against the classical weights."""

    indices: np.ndarray
    errors: np.ndarray  # absolute, units of tau^-alpha
    n_max: int
    parameters: Dict[str, Any] = field(default_factory=dict)
    raw: bool = False

    @property
    def max_tail_error(self) -> float:
        """Largest error beyond the exact head."""
        head = 0 if self.raw else int(self.parameters.get("head_length", 0))
        tail = self.errors[self.indices >= head]
        return float(tail.max()) if tail.size else 0.0


class FastKernel(ABC):
    """
    Compressed representation of a CQ weight sequence.

    The first ``head_length`` weights are kept exactly; every later weight is
    reconstructed from one or more geometric families starting at ``offset``.
    """

    scheme: Scheme
    offset: int
    # first index whose error depends on the point counts rather than the head
    far_tail_start: int = 0

    def __init__(
        self,
        alpha: float,
        tau: float,
        head: np.ndarray,
        families: Tuple[GeometricFamily, ...],
    ):
        """
        Initialize kernel.

        Args:
            alpha: CQ order in (0, 1)
            tau: Time step
            head: Exact leading weights d_0..d_(H-1)
            families: Geometric families describing weights i >= offset
        """
        self.alpha = float(alpha)
        self.tau = float(tau)
        self.head = head
        self.families = families

    @classmethod
    @abstractmethod
    def from_config(
        cls, alpha: float, tau: float, config, n_max: Optional[int] = None
    ) -> "FastKernel":
        """
        Build a kernel from a KernelConfig.

        Args:
            alpha: CQ order
            tau: Time step
            config: KernelConfig instance
            n_max: Largest weight index the caller will use; with
                config.points_auto the point counts grow to resolve it

        Returns:
            Kernel instance
        """
        pass

    @property
    def head_length(self) -> int:
        return len(self.head)

    @property
    def n_points(self) -> int:
        """Total number of geometric sequences."""
        return sum(len(f) for f in self.families)

    def reconstruct(self, i):
        """
        Weight(s) at index i from the geometric families alone.

        Args:
            i: Index or array of indices, each >= offset

        Returns:
            Float or array matching i
        """
        idx = np.asarray(i)
        if np.any(idx < self.offset):
            raise ParameterError(f"Reconstruction starts at index {self.offset}")
        powers = (idx - self.offset).astype(float).reshape(-1)
        total = np.zeros(powers.shape)
        for start in range(0, len(powers), _CHUNK):
            block = powers[start : start + _CHUNK]
            for family in self.families:
                total[start : start + _CHUNK] += np.tensordot(
                    family.multipliers, family.ratios[:, None] ** block[None, :], axes=1
                )
        if np.ndim(i) == 0:
            return float(total[0])
        return total.reshape(idx.shape)

    def weight(self, i: int) -> float:
        """Exact head weight for i < head_length, reconstructed weight after."""
        if i < 0:
            raise ParameterError(f"Weight index must be nonnegative, got {i}")
        if i < self.head_length:
            return float(self.head[i])
        return self.reconstruct(i)

    def compressed_weights(self, n_max: int) -> np.ndarray:
        """The weight sequence 0..n_max as the fast scheme sees it."""
        weights = np.empty(n_max + 1)
        n_head = min(self.head_length, n_max + 1)
        weights[:n_head] = self.head[:n_head]
        if n_max >= self.head_length:
            weights[self.head_length :] = self.reconstruct(
                np.arange(self.head_length, n_max + 1)
            )
        return weights

    def classical(self, n_max: int) -> WeightTable:
        """Classical weights of the same scheme, order and step."""
        return WEIGHT_FUNCTIONS[self.scheme](self.alpha, self.tau, n_max)

    def describe(self) -> Dict[str, Any]:
        """Parameters echoed into reports."""
        return {
            "scheme": self.scheme.value,
            "alpha": self.alpha,
            "tau": self.tau,
            "head_length": self.head_length,
            "n_points": [len(f) for f in self.families],
        }


def kernel_error_report(kernel: FastKernel, n_max: int, raw: bool = False) -> KernelErrorReport:
    """
    Compare a compressed kernel against the classical weights.

    Args:
        kernel: Kernel to check
        n_max: Largest index checked, >= head length
        raw: Report the geometric reconstruction for every index >= offset,
            ignoring the exact head

    Returns:
        KernelErrorReport over indices 0..n_max
    """
    if n_max < kernel.head_length:
        raise ParameterError(
            f"n_max ({n_max}) must be at least the head length ({kernel.head_length})"
        )
    exact = kernel.classical(n_max).weights
    indices = np.arange(n_max + 1)
    errors = np.zeros(n_max + 1)

    start = kernel.offset if raw else kernel.head_length
    approx = kernel.reconstruct(indices[start:])
    errors[start:] = np.abs(approx - exact[start:])

    return KernelErrorReport(
        indices=indices,
        errors=errors,
        n_max=n_max,
        parameters=kernel.describe(),
        raw=raw,
    )


def points_for_window(n_points: int, n_max: Optional[int]) -> int:
    """
    Point count that resolves weights up to n_max.

    Args:
        n_points: Configured count, never lowered
        n_max: Largest index used; None keeps n_points

    Returns:
        max(n_points, ceil(sqrt(TAIL_RESOLUTION * n_max))), the growth capped at MAX_POINTS
    """
    if not n_max or n_max < 1:
        return n_points
    needed = ceil(sqrt(TAIL_RESOLUTION * n_max))
    return max(n_points, min(MAX_POINTS, needed))


def far_tail_error(kernel: FastKernel, n_max: int) -> float:
    """Largest error over n_max / TAIL_RESOLUTION <= i <= n_max, past the head."""
    start = max(kernel.head_length, kernel.far_tail_start, n_max // TAIL_RESOLUTION)
    if n_max < start:
        return 0.0
    report = kernel_error_report(kernel, n_max)
    return float(report.errors[start:].max())


K = TypeVar("K", bound=FastKernel)


def resolve_points(
    build: Callable[[int], K],
    n_points: int,
    n_max: Optional[int],
    eps_tol: float,
) -> K:
    """
    Build a kernel whose far tail stays within eps_tol tau^-alpha up to n_max.

    Starts at points_for_window and doubles the point count of the slowly
    decaying family until far_tail_error passes. The head region is left to
    the head length.

    Args:
        build: Maps a point count to a kernel
        n_points: Configured point count
        n_max: Largest weight index used; None builds with n_points unchecked
        eps_tol: Tolerance in units of tau^-alpha

    Returns:
        Kernel instance
    """
    points = points_for_window(n_points, n_max)
    kernel = build(points)
    if not n_max:
        return kernel

    threshold = eps_tol * kernel.tau ** (-kernel.alpha)
    error = far_tail_error(kernel, n_max)
    while error > threshold and points < MAX_POINTS:
        points = min(MAX_POINTS, 2 * points)
        kernel = build(points)
        error = far_tail_error(kernel, n_max)

    if error > threshold:
        logger.warning(
            "%s kernel alpha=%.6g: tail error %.3g tau^-alpha up to i=%d with %d points",
            kernel.scheme.value.upper(), kernel.alpha,
            error * kernel.tau**kernel.alpha, n_max, points,
        )
    elif points != n_points:
        logger.info(
            "%s kernel alpha=%.6g: %d points resolve i <= %d",
            kernel.scheme.value.upper(), kernel.alpha, points, n_max,
        )
    return kernel
