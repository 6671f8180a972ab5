"""Compressed backward-Euler CQ kernel."""

from typing import Optional

import numpy as np

from ..errors import ParameterError
from ..logger import logger
from ..quadrature import gauss_jacobi
from ..weights import Scheme, be_weights
from .base import FastKernel, GeometricFamily, resolve_points


class FastKernelBE(FastKernel):
    """
    Backward-Euler kernel with head [d_0, d_1].

    For i >= 2,

        d_i = -sin(pi a) / (4 pi tau^a) * int (1-s)^a (1+s)^(1-a) ((s+1)/2)^(i-2) ds,

    so an N_p-point Gauss-Jacobi rule on (a, 1-a) reproduces d_i exactly for
    2 <= i <= 2 N_p + 1.
    """

    scheme = Scheme.BE
    offset = 2

    @classmethod
    def build(cls, alpha: float, tau: float, n_points: int) -> "FastKernelBE":
        """
        Build the kernel.

        Args:
            alpha: CQ order in (0, 1); the solver passes 1 - alpha_i
            tau: Time step
            n_points: Gauss-Jacobi points, >= 2

        Returns:
            FastKernelBE instance
        """
        if not (0 < alpha < 1):
            raise ParameterError(f"Kernel order must lie in (0, 1), got {alpha}")
        if n_points < 2:
            raise ParameterError(f"BE kernel needs at least 2 points, got {n_points}")

        rule = gauss_jacobi(alpha, 1 - alpha, n_points)
        prefactor = -np.sin(np.pi * alpha) / (4 * np.pi * tau**alpha)
        family = GeometricFamily(
            multipliers=prefactor * rule.weights,
            ratios=(rule.nodes + 1) / 2,
        )
        head = be_weights(alpha, tau, 1).weights

        logger.debug("BE kernel alpha=%.6g tau=%.6g N_p=%d", alpha, tau, n_points)
        return cls(alpha, tau, head, (family,))

    @classmethod
    def from_config(
        cls, alpha: float, tau: float, config, n_max: Optional[int] = None
    ) -> "FastKernelBE":
        if not config.points_auto:
            return cls.build(alpha, tau, config.n_points_be)
        return resolve_points(
            lambda points: cls.build(alpha, tau, points),
            config.n_points_be,
            n_max,
            config.eps_tol,
        )

    @property
    def exact_window(self) -> int:
        """Largest index reproduced exactly by the rule."""
        return 2 * self.n_points + 1


def build_be_kernel(alpha: float, tau: float, n_points: int = 64) -> FastKernelBE:
    """Build a compressed BE kernel (see FastKernelBE.build)."""
    return FastKernelBE.build(alpha, tau, n_points)
