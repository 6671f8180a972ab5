"""Base time-stepper interface for the two-state system."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..config import KernelConfig
from ..errors import SequencingError
from ..weights import Scheme
from .problem import DiscreteLaplacian, ProblemSpec, StateField, initial_field


class TimeScheme(str, Enum):
    """Available time steppers."""

    BE = "be"
    FAST_BE = "fastbe"
    SBD = "sbd"
    FAST_SBD = "fastsbd"


@dataclass
class StepperMetadata:
    """Metadata describing a stepper."""

    id: TimeScheme
    name: str
    family: Scheme  # generating function of the CQ weights
    fast: bool
    order: int  # temporal convergence order


class BaseStepper(ABC):
    """Abstract base class for all time steppers."""

    ID: Optional[TimeScheme] = None
    NAME: Optional[str] = None
    FAMILY: Optional[Scheme] = None
    FAST: bool = False
    ORDER: Optional[int] = None

    def __init__(self, spec: ProblemSpec, kernel_config: Optional[KernelConfig] = None):
        """
        Initialize stepper at t = 0 and build weights and factorizations.

        Args:
            spec: Problem specification
            kernel_config: Compressed kernel parameters (fast steppers only)
        """
        self.spec = spec
        self.kernel_config = kernel_config or KernelConfig()
        self.tau = spec.tau
        self.coupling_a = spec.coupling_a
        self.laplacian = DiscreteLaplacian(spec.grid_m, spec.length)
        self.initial = initial_field(spec)
        self.state = self.initial.copy()
        self.setup()

    @property
    def metadata(self) -> StepperMetadata:
        """
        Return stepper metadata.

        Returns:
            StepperMetadata instance describing this stepper
        """
        required = {"ID": self.ID, "NAME": self.NAME, "FAMILY": self.FAMILY, "ORDER": self.ORDER}
        missing = [key for key, value in required.items() if value is None]
        if missing:
            raise ValueError(f"Missing metadata fields: {', '.join(missing)}")
        return StepperMetadata(
            id=self.ID,
            name=self.NAME,
            family=self.FAMILY,
            fast=self.FAST,
            order=self.ORDER,
        )

    @abstractmethod
    def setup(self) -> None:
        """Build weights or kernels and factorize the implicit systems."""
        pass

    @abstractmethod
    def advance(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Compute time level n from the levels before it.

        Args:
            n: Level to compute, 1..n_steps

        Returns:
            (g1, g2) at level n
        """
        pass

    def step(self) -> StateField:
        """
        Advance the state by one time step.

        Raises:
            SequencingError: If the final time was already reached
        """
        n = self.state.n + 1
        if n > self.spec.n_steps:
            raise SequencingError(f"Already at the final step {self.spec.n_steps}")
        g1, g2 = self.advance(n)
        self.state = StateField(g1=g1, g2=g2, n=n)
        return self.state

    def operator(self, v: np.ndarray) -> np.ndarray:
        """(a + A) v."""
        return self.coupling_a * v + self.laplacian.apply(v)

    def coupled_rhs(
        self,
        known1: np.ndarray,
        known2: np.ndarray,
        tail1: np.ndarray,
        tail2: np.ndarray,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Right-hand sides once the CQ tails are known.

        rhs1 = known1 - (a + A) tail1 + a tail2, and symmetrically for rhs2.
        """
        a = self.coupling_a
        rhs1 = known1 - self.operator(tail1) + a * tail2
        rhs2 = known2 - self.operator(tail2) + a * tail1
        return rhs1, rhs2
