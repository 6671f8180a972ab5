"""Run a time stepper over a whole problem with timing."""

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

from ..config import KernelConfig
from ..errors import ParameterError
from ..logger import logger
from .backward_euler import BEStepper, FastBEStepper
from .base_stepper import BaseStepper, TimeScheme
from .bdf2 import FastSBDStepper, SBDStepper
from .problem import ProblemSpec, StateField

# Stepper class registry
STEPPER_CLASSES = {
    TimeScheme.BE: BEStepper,
    TimeScheme.FAST_BE: FastBEStepper,
    TimeScheme.SBD: SBDStepper,
    TimeScheme.FAST_SBD: FastSBDStepper,
}


@dataclass
class RunResult:
    """Outcome of one run."""

    scheme: TimeScheme
    spec: ProblemSpec
    final: StateField
    snapshots: Dict[int, StateField] = field(default_factory=dict)
    setup_seconds: float = 0.0  # kernel build and factorization
    loop_seconds: float = 0.0  # time loop only


def create_stepper(
    scheme, spec: ProblemSpec, kernel_config: Optional[KernelConfig] = None
) -> BaseStepper:
    """
    Factory function to create a stepper.

    Args:
        scheme: TimeScheme or its name ("be", "fastbe", "sbd", "fastsbd")
        spec: Problem specification
        kernel_config: KernelConfig for the fast steppers

    Returns:
        Stepper instance positioned at t = 0
    """
    try:
        stepper_class = STEPPER_CLASSES[TimeScheme(scheme)]
    except ValueError as e:
        raise ParameterError(f"Unknown time scheme {scheme!r}") from e
    return stepper_class(spec, kernel_config)


def run(
    spec: ProblemSpec,
    scheme,
    kernel_config: Optional[KernelConfig] = None,
    snapshot_steps: Iterable[int] = (),
) -> RunResult:
    """
    Advance a problem to its final time.

    Args:
        spec: Problem specification
        scheme: TimeScheme or its name
        kernel_config: KernelConfig for the fast steppers
        snapshot_steps: Time levels whose state is kept (0..n_steps)

    Returns:
        RunResult with the final state, snapshots and timings
    """
    wanted = set(snapshot_steps)
    out_of_range = [n for n in wanted if not 0 <= n <= spec.n_steps]
    if out_of_range:
        raise ParameterError(f"Snapshot steps {sorted(out_of_range)} outside 0..{spec.n_steps}")

    start = time.perf_counter()
    stepper = create_stepper(scheme, spec, kernel_config)
    setup_seconds = time.perf_counter() - start

    snapshots: Dict[int, StateField] = {}
    if 0 in wanted:
        snapshots[0] = stepper.state.copy()

    start = time.perf_counter()
    for _ in range(spec.n_steps):
        state = stepper.step()
        if state.n in wanted:
            snapshots[state.n] = state.copy()
    loop_seconds = time.perf_counter() - start

    logger.info(
        "%s run: M=%d N=%d tau=%.6g setup %.3fs loop %.3fs",
        stepper.metadata.name,
        spec.grid_m,
        spec.n_steps,
        spec.tau,
        setup_seconds,
        loop_seconds,
    )
    return RunResult(
        scheme=TimeScheme(scheme),
        spec=spec,
        final=stepper.state,
        snapshots=snapshots,
        setup_seconds=setup_seconds,
        loop_seconds=loop_seconds,
    )
