"""Shared pytest fixtures."""

import numpy as np
import pytest

from fraq.config import KernelConfig
from fraq.solver import ProblemSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def kernel_config():
    """Defaults of the compressed kernels."""
    return KernelConfig()


@pytest.fixture
def small_spec():
    """A coarse problem that every stepper runs in well under a second."""
    return ProblemSpec(
        alpha1=0.3,
        alpha2=0.6,
        coupling_a=2.0,
        grid_m=15,
        t_final=0.5,
        n_steps=40,
        initial="poly_sin",
    )


@pytest.fixture(autouse=True)
def isolated_data_dir(tmp_path, monkeypatch):
    """Keep log files and FRAQ_* settings out of the user's environment."""
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.delenv("FRAQ_THREADS", raising=False)
    monkeypatch.delenv("FRAQ_DEV", raising=False)
