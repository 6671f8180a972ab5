"""Compressed second-order backward difference (SBD) CQ kernel."""

from typing import Optional

import numpy as np

from ..errors import ParameterError
from ..logger import logger
from ..quadrature import gauss_jacobi
from ..weights import Scheme, sbd_weights
from .base import FastKernel, GeometricFamily, kernel_error_report, resolve_points

MIN_HEAD = 3


def default_head_length(alpha: float) -> int:
    """Exact leading weights kept by default: 15 for alpha <= 0.5, 17 above."""
    return 15 if alpha <= 0.5 else 17


class FastKernelSBD(FastKernel):
    """
    SBD kernel with an exact head d_0..d_(N_s-1) and two geometric families.

    Both families come from Gauss-Jacobi rules on the exponents (a, 2-2a), with
    c = sin(pi a) / (pi tau^a):

        family 1: m = Re[-2^(2+2a) e^(-i pi a) c w (s+5)^-4],  r = (s+1)/(s+5)
        family 2: m = Re[-2^(-a-3) c w (1+3s)^a],             r = (s+1)/2

    and d_i ~ sum m r^(i-3). The factor (1+3s)^a has a kink at s = -1/3, so
    family 2 converges only like 3^-i; the exact head absorbs small indices.
    """

    scheme = Scheme.SBD
    offset = 3
    # head-edge error falls off like 3^-i; by here only the point counts matter
    far_tail_start = 40

    @classmethod
    def build(
        cls,
        alpha: float,
        tau: float,
        n_points_1: int = 41,
        n_points_2: int = 41,
        n_head: Optional[int] = None,
    ) -> "FastKernelSBD":
        """
        Build the kernel.

        Args:
            alpha: CQ order in (0, 1); the solver passes 1 - alpha_i
            tau: Time step
            n_points_1: Points of the first family
            n_points_2: Points of the second family
            n_head: Exact leading weights N_s >= 3; None for default_head_length

        Returns:
            FastKernelSBD instance
        """
        if not (0 < alpha < 1):
            raise ParameterError(f"Kernel order must lie in (0, 1), got {alpha}")
        if n_head is None:
            n_head = default_head_length(alpha)
        if n_head < MIN_HEAD:
            raise ParameterError(f"SBD head length must be at least {MIN_HEAD}, got {n_head}")

        scale = np.sin(np.pi * alpha) / (np.pi * tau**alpha)

        rule_1 = gauss_jacobi(alpha, 2 - 2 * alpha, n_points_1)
        s1 = rule_1.nodes
        factor_1 = -(2.0 ** (2 + 2 * alpha)) * np.exp(-1j * np.pi * alpha) * scale
        family_1 = GeometricFamily(
            multipliers=np.real(factor_1 * rule_1.weights * (s1 + 5) ** -4),
            ratios=(s1 + 1) / (s1 + 5),
        )

        rule_2 = gauss_jacobi(alpha, 2 - 2 * alpha, n_points_2)
        s2 = rule_2.nodes
        factor_2 = -(2.0 ** (-alpha - 3)) * scale
        family_2 = GeometricFamily(
            multipliers=np.real(factor_2 * rule_2.weights * (1 + 3 * s2 + 0j) ** alpha),
            ratios=(s2 + 1) / 2,
        )

        head = sbd_weights(alpha, tau, n_head - 1).weights

        logger.debug(
            "SBD kernel alpha=%.6g tau=%.6g N_p=(%d, %d) N_s=%d",
            alpha, tau, n_points_1, n_points_2, n_head,
        )
        return cls(alpha, tau, head, (family_1, family_2))

    @classmethod
    def from_config(
        cls, alpha: float, tau: float, config, n_max: Optional[int] = None
    ) -> "FastKernelSBD":
        n_head = config.n_head
        window = n_max
        if config.auto_head:
            window = max(n_max or 0, config.n_check)
            n_head = select_head_length(
                alpha,
                tau,
                config.n_points_1,
                config.n_points_2,
                eps_tol=config.eps_tol,
                n_check=config.n_check,
                resolve=config.points_auto,
            )
        if not config.points_auto:
            return cls.build(alpha, tau, config.n_points_1, config.n_points_2, n_head)
        # family 1 has ratios <= 1/3 and never needs more points
        return resolve_points(
            lambda points: cls.build(alpha, tau, config.n_points_1, points, n_head),
            config.n_points_2,
            window,
            config.eps_tol,
        )


def build_sbd_kernel(
    alpha: float,
    tau: float,
    n_points_1: int = 41,
    n_points_2: int = 41,
    n_head: Optional[int] = None,
) -> FastKernelSBD:
    """Build a compressed SBD kernel (see FastKernelSBD.build)."""
    return FastKernelSBD.build(alpha, tau, n_points_1, n_points_2, n_head)


def select_head_length(
    alpha: float,
    tau: float,
    n_points_1: int = 41,
    n_points_2: int = 41,
    eps_tol: float = 1e-12,
    n_check: int = 1000,
    resolve: bool = True,
) -> int:
    """
    Smallest head length N_s with max_{N_s <= i <= n_check} eps_i <= eps_tol tau^-alpha.

    With resolve, the second family first gets enough points for the tail up
    to n_check (see resolve_points); the head then only has to absorb the
    slowly converging indices near the kink of (1+3s)^a.

    Args:
        alpha: CQ order
        tau: Time step
        n_points_1: Points of the first family
        n_points_2: Points of the second family
        eps_tol: Tolerance in units of tau^-alpha
        n_check: Largest weight index checked
        resolve: Grow n_points_2 to resolve the tail before searching

    Returns:
        Head length N_s >= 3

    Raises:
        ParameterError: If no head length up to n_check meets the tolerance
    """
    if resolve:
        bare = resolve_points(
            lambda points: FastKernelSBD.build(alpha, tau, n_points_1, points, MIN_HEAD),
            n_points_2,
            n_check,
            eps_tol,
        )
    else:
        bare = FastKernelSBD.build(alpha, tau, n_points_1, n_points_2, MIN_HEAD)
    report = kernel_error_report(bare, n_check, raw=True)

    # suffix maxima: worst error from index i onwards
    worst_after = np.maximum.accumulate(report.errors[::-1])[::-1]
    threshold = eps_tol * tau ** (-alpha)
    candidates = np.nonzero(worst_after[MIN_HEAD:] <= threshold)[0]
    if candidates.size == 0:
        raise ParameterError(
            f"No head length reaches eps_tol={eps_tol:g} within {n_check} weights; "
            "raise the point counts"
        )
    n_head = int(candidates[0]) + MIN_HEAD
    logger.info(
        "Auto head length for alpha=%.6g tau=%.6g: N_s=%d with N_p=%s",
        alpha, tau, n_head, bare.describe()["n_points"],
    )
    return n_head
