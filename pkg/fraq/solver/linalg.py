"""Implicit block solve shared by all time steppers."""

import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..errors import SingularSystemError
from ..logger import logger
from .problem import DiscreteLaplacian


class BlockSystem:
    """
    The 2M x 2M system

        [lead/tau + d01 (a + A)      -a d02            ] [G1]   [rhs1]
        [-a d01                      lead/tau + d02 (a + A)] [G2] = [rhs2]

    with unknowns interleaved as (G1_1, G2_1, G1_2, G2_2, ...), which makes the
    matrix pentadiagonal. Factorized once with a sparse LU in natural order so
    the band is preserved.
    """

    def __init__(
        self,
        d01: float,
        d02: float,
        coupling_a: float,
        tau: float,
        laplacian: DiscreteLaplacian,
        lead: float = 1.0,
    ):
        """
        Assemble and factorize.

        Args:
            d01: Weight multiplying the G1 operator (any 2/3 factor folded in)
            d02: Weight multiplying the G2 operator
            coupling_a: Coupling constant a
            tau: Time step
            laplacian: Discrete Laplacian
            lead: Leading coefficient of the time difference (1 or 3/2)

        Raises:
            SingularSystemError: If the factorization fails
        """
        self.d01 = d01
        self.d02 = d02
        self.coupling_a = coupling_a
        self.tau = tau
        self.lead = lead
        self.grid_m = laplacian.grid_m
        self.matrix = self._assemble(laplacian)

        try:
            self._lu = splu(self.matrix, permc_spec="NATURAL")
        except RuntimeError as e:
            raise SingularSystemError(f"Block system factorization failed: {e}") from e
        logger.debug(
            "Factorized block system M=%d lead=%g d01=%.6g d02=%.6g a=%g",
            self.grid_m, lead, d01, d02, coupling_a,
        )

    def _assemble(self, laplacian: DiscreteLaplacian) -> sp.csc_matrix:
        m = self.grid_m
        a = self.coupling_a
        inv_h2 = 1.0 / laplacian.h**2
        d = np.tile([self.d01, self.d02], m)

        main = self.lead / self.tau + d * (a + 2 * inv_h2)
        # (2j, 2j+1) couples G2 into equation 1; (2j+1, 2j+2) is empty
        upper_1 = np.zeros(2 * m - 1)
        upper_1[0::2] = -a * self.d02
        lower_1 = np.zeros(2 * m - 1)
        lower_1[0::2] = -a * self.d01
        band_2 = -d[: 2 * m - 2] * inv_h2

        return sp.diags(
            [band_2, lower_1, main, upper_1, band_2],
            [-2, -1, 0, 1, 2],
            shape=(2 * m, 2 * m),
            format="csc",
        )

    def solve(self, rhs1: np.ndarray, rhs2: np.ndarray):
        """
        Solve for (G1, G2).

        Raises:
            SingularSystemError: If the solution is not finite
        """
        rhs = np.empty(2 * self.grid_m)
        rhs[0::2] = rhs1
        rhs[1::2] = rhs2
        solution = self._lu.solve(rhs)
        if not np.all(np.isfinite(solution)):
            raise SingularSystemError("Block solve produced non-finite values")

        if logger.isEnabledFor(logging.DEBUG):
            residual = np.linalg.norm(self.matrix @ solution - rhs)
            if residual > 1e-12 * max(np.linalg.norm(rhs), np.finfo(float).tiny):
                logger.debug("Block solve residual %.3e exceeds 1e-12 |rhs|", residual)

        return solution[0::2].copy(), solution[1::2].copy()


def solve_block_system(
    d01: float,
    d02: float,
    coupling_a: float,
    tau: float,
    laplacian: DiscreteLaplacian,
    rhs1: np.ndarray,
    rhs2: np.ndarray,
    bdf_lead: float = 1.0,
):
    """One-off factorize-and-solve of a BlockSystem."""
    system = BlockSystem(d01, d02, coupling_a, tau, laplacian, lead=bdf_lead)
    return system.solve(rhs1, rhs2)
