"""Problem definition for the two-state fractional Fokker-Planck system.

    dG1/dt + a D^(1-a1) G1 + D^(1-a1) A G1 = a D^(1-a2) G2
    dG2/dt + a D^(1-a2) G2 + D^(1-a2) A G2 = a D^(1-a1) G1

on (0, L) with A = -d^2/dx^2 and homogeneous Dirichlet boundary values.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np
import scipy.sparse as sp

from ..errors import ParameterError


class InitialData(str, Enum):
    """Initial data tags."""

    POLY_SIN = "poly_sin"  # G1 = x(1-x), G2 = sin x
    POLY_SINPI = "poly_sinpi"  # G1 = x(x-1), G2 = sin(pi x)
    INDICATOR = "indicator"  # G1 = (1-x) on (1/2, 1), G2 = x on (0, 1/2)
    CUSTOM = "custom"  # caller-supplied samples
    ZERO = "zero"


@dataclass
class ProblemSpec:
    """One run of the two-state system."""

    alpha1: float
    alpha2: float
    coupling_a: float
    grid_m: int
    t_final: float
    n_steps: int
    initial: InitialData = InitialData.POLY_SIN
    length: float = 1.0
    custom_g1: Optional[np.ndarray] = None
    custom_g2: Optional[np.ndarray] = None

    def __post_init__(self):
        self.initial = InitialData(self.initial)
        self.t_final = float(self.t_final)
        for name, value in (("alpha1", self.alpha1), ("alpha2", self.alpha2)):
            if not (0 < value < 1):
                raise ParameterError(f"{name} must lie in (0, 1), got {value}")
        if int(self.grid_m) != self.grid_m or self.grid_m < 1:
            raise ParameterError(f"grid_m must be a positive integer, got {self.grid_m}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ParameterError(f"n_steps must be a positive integer, got {self.n_steps}")
        if not (self.t_final > 0 and self.length > 0):
            raise ParameterError("t_final and length must be positive")
        if not np.isfinite(self.coupling_a):
            raise ParameterError("coupling_a must be finite")
        self.grid_m = int(self.grid_m)
        self.n_steps = int(self.n_steps)

        if self.initial is InitialData.CUSTOM:
            if self.custom_g1 is None or self.custom_g2 is None:
                raise ParameterError("custom initial data needs custom_g1 and custom_g2")
            for name, samples in (("custom_g1", self.custom_g1), ("custom_g2", self.custom_g2)):
                if np.shape(samples) != (self.grid_m,):
                    raise ParameterError(f"{name} must have {self.grid_m} interior samples")

    @property
    def tau(self) -> float:
        return self.t_final / self.n_steps

    @property
    def h(self) -> float:
        return self.length / (self.grid_m + 1)

    @property
    def grid(self) -> np.ndarray:
        """Interior nodes x_1..x_M."""
        return self.h * np.arange(1, self.grid_m + 1)

    @property
    def cq_orders(self) -> tuple:
        """Orders of the Riemann-Liouville derivatives acting on G1 and G2."""
        return (1 - self.alpha1, 1 - self.alpha2)

    def with_steps(self, n_steps: int) -> "ProblemSpec":
        """Same problem with a different step count."""
        return replace(self, n_steps=n_steps)


@dataclass
class StateField:
    """Grid values of G1 and G2 at time level n."""

    g1: np.ndarray
    g2: np.ndarray
    n: int = 0

    def copy(self) -> "StateField":
        return StateField(self.g1.copy(), self.g2.copy(), self.n)


def l2_norm(v: np.ndarray, h: float) -> float:
    """Discrete L2 norm sqrt(h * sum v_k^2)."""
    return float(np.sqrt(h * np.dot(v, v)))


class DiscreteLaplacian:
    """A = -Delta_h, the (-1, 2, -1) / h^2 stencil on interior nodes."""

    def __init__(self, grid_m: int, length: float = 1.0):
        if grid_m < 1:
            raise ParameterError(f"grid_m must be at least 1, got {grid_m}")
        self.grid_m = int(grid_m)
        self.length = float(length)
        self.h = self.length / (self.grid_m + 1)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """A v with zero boundary values."""
        out = 2.0 * v
        out[1:] -= v[:-1]
        out[:-1] -= v[1:]
        return out / self.h**2

    def matrix(self) -> sp.spmatrix:
        """Sparse tridiagonal matrix of A."""
        m = self.grid_m
        return sp.diags(
            [-np.ones(m - 1), 2 * np.ones(m), -np.ones(m - 1)], [-1, 0, 1], format="csr"
        ) / self.h**2

    def eigenvalues(self) -> np.ndarray:
        """lambda_k = (4 / h^2) sin^2(k pi h / (2L)), k = 1..M."""
        k = np.arange(1, self.grid_m + 1)
        return 4.0 / self.h**2 * np.sin(k * np.pi * self.h / (2 * self.length)) ** 2

    def eigenvectors(self) -> np.ndarray:
        """Orthonormal sine modes as columns: sqrt(2/(M+1)) sin(j k pi / (M+1))."""
        m = self.grid_m
        j = np.arange(1, m + 1)
        return np.sqrt(2.0 / (m + 1)) * np.sin(np.outer(j, j) * np.pi / (m + 1))


def initial_field(spec: ProblemSpec) -> StateField:
    """
    Sample the initial data at the interior nodes.

    Indicator data is sampled pointwise and both indicators vanish at x = 1/2.

    Args:
        spec: Problem specification

    Returns:
        StateField at n = 0
    """
    x = spec.grid
    if spec.initial is InitialData.POLY_SIN:
        g1 = x * (1 - x)
        g2 = np.sin(x)
    elif spec.initial is InitialData.POLY_SINPI:
        g1 = x * (x - 1)
        g2 = np.sin(np.pi * x)
    elif spec.initial is InitialData.INDICATOR:
        g1 = np.where(x > 0.5, 1 - x, 0.0)
        g2 = np.where(x < 0.5, x, 0.0)
    elif spec.initial is InitialData.CUSTOM:
        g1 = np.array(spec.custom_g1, dtype=float)
        g2 = np.array(spec.custom_g2, dtype=float)
    else:
        g1 = np.zeros_like(x)
        g2 = np.zeros_like(x)
    return StateField(g1=g1, g2=g2, n=0)
