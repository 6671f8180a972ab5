"""First-order steppers: classical and fast backward-Euler CQ.

Both leave G(t_0) out of the CQ sums:

    (G1^n - G1^(n-1)) / tau + (a + A) sum_{i=0}^{n-1} d1_i G1^(n-i)
        = a sum_{i=0}^{n-1} d2_i G2^(n-i)
"""

from typing import Tuple

import numpy as np

from ..kernels import HistoryState, Variant, create_kernel
from ..logger import logger
from ..weights import Scheme, be_weights
from .base_stepper import BaseStepper, TimeScheme
from .linalg import BlockSystem


class BEStepper(BaseStepper):
    """Classical BE scheme; keeps the full solution history."""

    ID = TimeScheme.BE
    NAME = "Backward Euler CQ"
    FAMILY = Scheme.BE
    FAST = False
    ORDER = 1

    def setup(self) -> None:
        order1, order2 = self.spec.cq_orders
        n_steps = self.spec.n_steps
        self.weights1 = be_weights(order1, self.tau, n_steps).weights
        self.weights2 = be_weights(order2, self.tau, n_steps).weights
        self.system = BlockSystem(
            self.weights1[0], self.weights2[0], self.coupling_a, self.tau, self.laplacian
        )

        m = self.spec.grid_m
        self.history1 = np.empty((n_steps + 1, m))
        self.history2 = np.empty((n_steps + 1, m))
        self.history1[0] = self.initial.g1
        self.history2[0] = self.initial.g2

    def advance(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        # sum_{i=1}^{n-1} d_i G^(n-i), newest level first; empty at n = 1
        tail1 = self.weights1[1:n] @ self.history1[n - 1 : 0 : -1]
        tail2 = self.weights2[1:n] @ self.history2[n - 1 : 0 : -1]

        rhs1, rhs2 = self.coupled_rhs(
            self.history1[n - 1] / self.tau, self.history2[n - 1] / self.tau, tail1, tail2
        )
        g1, g2 = self.system.solve(rhs1, rhs2)
        self.history1[n] = g1
        self.history2[n] = g2
        return g1, g2


class FastBEStepper(BaseStepper):
    """BE scheme with the CQ history replaced by geometric-sum recursions."""

    ID = TimeScheme.FAST_BE
    NAME = "Fast backward Euler CQ"
    FAMILY = Scheme.BE
    FAST = True
    ORDER = 1

    def setup(self) -> None:
        order1, order2 = self.spec.cq_orders
        n_max = self.spec.n_steps
        kernel1 = create_kernel(Scheme.BE, order1, self.tau, self.kernel_config, n_max)
        kernel2 = create_kernel(Scheme.BE, order2, self.tau, self.kernel_config, n_max)
        self.kernels = (kernel1, kernel2)
        self.system = BlockSystem(
            kernel1.head[0], kernel2.head[0], self.coupling_a, self.tau, self.laplacian
        )

        self.history1 = HistoryState(kernel1, Variant.SCHEME)
        self.history2 = HistoryState(kernel2, Variant.SCHEME)
        self.history1.push(self.initial.g1)
        self.history2.push(self.initial.g2)
        logger.debug(
            "Fast BE setup: N_p=(%d, %d), tau=%.6g",
            kernel1.n_points,
            kernel2.n_points,
            self.tau,
        )

    def advance(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        self.history1.begin_step()
        self.history2.begin_step()

        rhs1, rhs2 = self.coupled_rhs(
            self.state.g1 / self.tau,
            self.state.g2 / self.tau,
            self.history1.tail(),
            self.history2.tail(),
        )
        g1, g2 = self.system.solve(rhs1, rhs2)
        self.history1.commit(g1)
        self.history2.commit(g2)
        return g1, g2
