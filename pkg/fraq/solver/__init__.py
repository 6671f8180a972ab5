"""Time steppers for the two-state fractional Fokker-Planck system."""

from .backward_euler import BEStepper, FastBEStepper
from .base_stepper import BaseStepper, StepperMetadata, TimeScheme
from .bdf2 import FastSBDStepper, SBDStepper
from .linalg import BlockSystem, solve_block_system
from .problem import (
    DiscreteLaplacian,
    InitialData,
    ProblemSpec,
    StateField,
    initial_field,
    l2_norm,
)
from .runner import STEPPER_CLASSES, RunResult, create_stepper, run

__all__ = [
    "BEStepper",
    "BaseStepper",
    "BlockSystem",
    "DiscreteLaplacian",
    "FastBEStepper",
    "FastSBDStepper",
    "InitialData",
    "ProblemSpec",
    "RunResult",
    "SBDStepper",
    "STEPPER_CLASSES",
    "StateField",
    "StepperMetadata",
    "TimeScheme",
    "create_stepper",
    "initial_field",
    "l2_norm",
    "run",
    "solve_block_system",
]
