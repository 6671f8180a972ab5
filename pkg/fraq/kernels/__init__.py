"""Compressed CQ kernels and their history recursions."""

from typing import Optional

from ..errors import ParameterError
from ..weights import Scheme
from .backward_euler import FastKernelBE, build_be_kernel
from .base import (
    TAIL_RESOLUTION,
    FastKernel,
    GeometricFamily,
    KernelErrorReport,
    far_tail_error,
    kernel_error_report,
    points_for_window,
    resolve_points,
)
from .bdf2 import FastKernelSBD, build_sbd_kernel, default_head_length, select_head_length
from .history import HistoryState, Variant, fast_derivative, history_init, history_push

# Kernel class registry
KERNEL_CLASSES = {
    Scheme.BE: FastKernelBE,
    Scheme.SBD: FastKernelSBD,
}


def create_kernel(
    scheme, alpha: float, tau: float, config, n_max: Optional[int] = None
) -> FastKernel:
    """
    Factory function to create a compressed kernel.

    Args:
        scheme: Scheme enum or name ("be", "sbd")
        alpha: CQ order
        tau: Time step
        config: KernelConfig instance
        n_max: Largest weight index used, for automatic point counts

    Returns:
        Kernel instance
    """
    try:
        kernel_class = KERNEL_CLASSES[Scheme(scheme)]
    except ValueError as e:
        raise ParameterError(f"Unknown kernel scheme {scheme!r}") from e
    return kernel_class.from_config(alpha, tau, config, n_max)


__all__ = [
    "TAIL_RESOLUTION",
    "FastKernel",
    "FastKernelBE",
    "FastKernelSBD",
    "GeometricFamily",
    "HistoryState",
    "KernelErrorReport",
    "Variant",
    "build_be_kernel",
    "build_sbd_kernel",
    "create_kernel",
    "default_head_length",
    "far_tail_error",
    "fast_derivative",
    "history_init",
    "history_push",
    "kernel_error_report",
    "points_for_window",
    "resolve_points",
    "select_head_length",
]
