"""Second-order steppers: classical and fast SBD CQ.

The first step uses the 2/3-1/3 weighting

    (G^1 - G^0) / tau + d_0 (a + A)(2/3 G1^1 + 1/3 G1^0) = a d2_0 (2/3 G2^1 + 1/3 G2^0)

and later steps the BDF2 difference with the initial-data correction

    (3/2 G^n - 2 G^(n-1) + 1/2 G^(n-2)) / tau
        + (a + A)[sum_{i=0}^{n-1} d_i G1^(n-i) + 1/2 d_(n-1) G1^0] = a[...]
"""

from typing import Tuple

import numpy as np

from ..kernels import HistoryState, Variant, create_kernel
from ..logger import logger
from ..weights import Scheme, sbd_weights
from .base_stepper import BaseStepper, TimeScheme
from .linalg import BlockSystem

BDF2_LEAD = 1.5


class _SBDBase(BaseStepper):
    """Shared first step and BDF2 right-hand side."""

    FAMILY = Scheme.SBD
    ORDER = 2

    def _build_systems(self, d01: float, d02: float) -> None:
        self.first_system = BlockSystem(
            2 * d01 / 3, 2 * d02 / 3, self.coupling_a, self.tau, self.laplacian
        )
        self.system = BlockSystem(
            d01, d02, self.coupling_a, self.tau, self.laplacian, lead=BDF2_LEAD
        )
        self._leading = (d01, d02)
        self._previous = self.initial.copy()

    def _first_step(self) -> Tuple[np.ndarray, np.ndarray]:
        d01, d02 = self._leading
        g1, g2 = self.initial.g1, self.initial.g2
        # the 1/3 G^0 parts of the CQ terms move to the right-hand side
        rhs1, rhs2 = self.coupled_rhs(g1 / self.tau, g2 / self.tau, d01 * g1 / 3, d02 * g2 / 3)
        return self.first_system.solve(rhs1, rhs2)

    def _bdf_step(self, tail1: np.ndarray, tail2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        known1 = (2 * self.state.g1 - 0.5 * self._previous.g1) / self.tau
        known2 = (2 * self.state.g2 - 0.5 * self._previous.g2) / self.tau
        rhs1, rhs2 = self.coupled_rhs(known1, known2, tail1, tail2)
        return self.system.solve(rhs1, rhs2)

    def _shift(self) -> None:
        self._previous = self.state


class SBDStepper(_SBDBase):
    """Classical SBD scheme; keeps the full solution history."""

    ID = TimeScheme.SBD
    NAME = "Second-order backward difference CQ"
    FAST = False

    def setup(self) -> None:
        order1, order2 = self.spec.cq_orders
        n_steps = self.spec.n_steps
        self.weights1 = sbd_weights(order1, self.tau, n_steps).weights
        self.weights2 = sbd_weights(order2, self.tau, n_steps).weights
        self._build_systems(self.weights1[0], self.weights2[0])

        m = self.spec.grid_m
        self.history1 = np.empty((n_steps + 1, m))
        self.history2 = np.empty((n_steps + 1, m))
        self.history1[0] = self.initial.g1
        self.history2[0] = self.initial.g2

    def advance(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        if n == 1:
            g1, g2 = self._first_step()
        else:
            tail1 = (
                self.weights1[1:n] @ self.history1[n - 1 : 0 : -1]
                + 0.5 * self.weights1[n - 1] * self.history1[0]
            )
            tail2 = (
                self.weights2[1:n] @ self.history2[n - 1 : 0 : -1]
                + 0.5 * self.weights2[n - 1] * self.history2[0]
            )
            g1, g2 = self._bdf_step(tail1, tail2)
            self._shift()
        self.history1[n] = g1
        self.history2[n] = g2
        return g1, g2


class FastSBDStepper(_SBDBase):
    """SBD scheme with an exact head and geometric-sum history recursions."""

    ID = TimeScheme.FAST_SBD
    NAME = "Fast second-order backward difference CQ"
    FAST = True

    def setup(self) -> None:
        order1, order2 = self.spec.cq_orders
        n_max = self.spec.n_steps
        kernel1 = create_kernel(Scheme.SBD, order1, self.tau, self.kernel_config, n_max)
        kernel2 = create_kernel(Scheme.SBD, order2, self.tau, self.kernel_config, n_max)
        self.kernels = (kernel1, kernel2)
        self._build_systems(kernel1.head[0], kernel2.head[0])

        self.history1 = HistoryState(kernel1, Variant.SCHEME)
        self.history2 = HistoryState(kernel2, Variant.SCHEME)
        self.history1.push(self.initial.g1)
        self.history2.push(self.initial.g2)
        logger.debug(
            "Fast SBD setup: N_s=(%d, %d), N_p=%s and %s, tau=%.6g",
            kernel1.head_length,
            kernel2.head_length,
            kernel1.describe()["n_points"],
            kernel2.describe()["n_points"],
            self.tau,
        )

    def advance(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        self.history1.begin_step()
        self.history2.begin_step()

        if n == 1:
            g1, g2 = self._first_step()
        else:
            kernel1, kernel2 = self.kernels
            # exact d_(n-1) inside the head, reconstructed beyond it
            tail1 = self.history1.tail() + 0.5 * kernel1.weight(n - 1) * self.initial.g1
            tail2 = self.history2.tail() + 0.5 * kernel2.weight(n - 1) * self.initial.g2
            g1, g2 = self._bdf_step(tail1, tail2)
            self._shift()

        self.history1.commit(g1)
        self.history2.commit(g2)
        return g1, g2
