"""Tests for classical CQ weights."""

import numpy as np
import pytest
from scipy.special import gamma

from fraq.errors import ParameterError, SingularParameterError
from fraq.weights import (
    Scheme,
    be_weights,
    coupling_from_transition,
    sbd_weights,
    weight_table,
)
from tests.oracles import be_weights_oracle, sbd_weights_oracle


def test_be_examples():
    assert be_weights(1.0, 0.5, 3).weights == pytest.approx([2, -2, 0, 0])
    assert be_weights(0.5, 1.0, 3).weights == pytest.approx([1, -0.5, -0.125, -0.0625])
    assert be_weights(0.3, 0.01, 0).weights == pytest.approx([10**0.6], rel=1e-14)


def test_sbd_examples():
    assert sbd_weights(1.0, 1.0, 4).weights == pytest.approx([1.5, -2, 0.5, 0, 0], abs=1e-15)
    assert sbd_weights(0.5, 1.0, 0).weights == pytest.approx([np.sqrt(1.5)], rel=1e-14)


def test_sbd_matches_series_oracle():
    oracle = sbd_weights_oracle(0.4, 1.0, 6)
    assert sbd_weights(0.4, 1.0, 6).weights == pytest.approx(oracle, rel=1e-13)


def test_oracle_equivalence_on_random_parameters(rng):
    for _ in range(20):
        alpha = rng.uniform(0.05, 1.0)
        tau = 10 ** rng.uniform(-4, 0)
        for compute, oracle in ((be_weights, be_weights_oracle), (sbd_weights, sbd_weights_oracle)):
            actual = compute(alpha, tau, 500).weights
            expected = oracle(alpha, tau, 500)
            np.testing.assert_allclose(
                actual, expected, rtol=1e-12, atol=1e-12 * np.abs(expected).max()
            )


@pytest.mark.parametrize("compute, lead", [(be_weights, 1.0), (sbd_weights, 1.5)])
def test_leading_weight(compute, lead):
    for alpha, tau in [(0.2, 1e-3), (0.7, 0.25), (1.0, 3.0)]:
        assert compute(alpha, tau, 5).weights[0] == pytest.approx(
            lead**alpha * tau ** (-alpha), rel=1e-14
        )


@pytest.mark.parametrize("compute", [be_weights, sbd_weights])
def test_scaling_law(compute, rng):
    for _ in range(10):
        alpha = rng.uniform(0.05, 1.0)
        tau = 10 ** rng.uniform(-4, 1)
        scaled = compute(alpha, tau, 60).weights
        unit = compute(alpha, 1.0, 60).weights
        np.testing.assert_allclose(scaled, tau ** (-alpha) * unit, rtol=1e-13)


def test_be_sign_pattern():
    for alpha in (0.1, 0.5, 0.99):
        weights = be_weights(alpha, 0.01, 200).weights
        assert weights[0] > 0
        assert np.all(weights[1:] < 0)


@pytest.mark.parametrize("compute", [be_weights, sbd_weights])
def test_generating_function_product(compute, rng):
    """Weights of order alpha convolved with order 1 - alpha give the order-1 stencil."""
    for _ in range(5):
        alpha = rng.uniform(0.05, 0.95)
        tau = rng.uniform(0.5, 2.0)
        product = np.convolve(
            compute(alpha, tau, 49).weights, compute(1 - alpha, tau, 49).weights
        )[:50]
        stencil = compute(1.0, tau, 49).weights
        np.testing.assert_allclose(product, stencil, atol=1e-12)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_partial_sums_decrease_to_zero(alpha):
    sums = np.cumsum(be_weights(alpha, 1.0, 10_000).weights)
    assert np.all(sums[1:] > 0)
    assert np.all(np.diff(sums[1:]) < 0)
    # partial sums are the coefficients of (1 - zeta)^(alpha - 1) ~ N^-alpha / Gamma(1 - alpha)
    n = 10_000
    assert sums[n] * n**alpha * gamma(1 - alpha) == pytest.approx(1.0, rel=1e-3)


def test_tables_are_immutable():
    table = be_weights(0.5, 1.0, 4)
    with pytest.raises(ValueError):
        table.weights[0] = 3.0
    assert table.scheme is Scheme.BE
    assert table.n_max == 4
    assert len(table) == 5


def test_weight_table_dispatch():
    assert weight_table("sbd", 0.4, 0.1, 3).scheme is Scheme.SBD
    assert weight_table(Scheme.BE, 0.4, 0.1, 3).weights == pytest.approx(
        be_weights(0.4, 0.1, 3).weights
    )
    with pytest.raises(ParameterError):
        weight_table("bdf3", 0.4, 0.1, 3)


@pytest.mark.parametrize("alpha, tau, n_max", [(0.0, 1.0, 3), (1.2, 1.0, 3), (0.5, 0.0, 3), (0.5, 1.0, -1)])
def test_invalid_weight_arguments(alpha, tau, n_max):
    with pytest.raises(ParameterError):
        be_weights(alpha, tau, n_max)
    with pytest.raises(ParameterError):
        sbd_weights(alpha, tau, n_max)


def test_coupling_from_transition():
    assert coupling_from_transition(1.0) == 0.0
    assert coupling_from_transition(0.75) == pytest.approx(0.5)
    assert coupling_from_transition(0.4) == pytest.approx(-3.0)


def test_coupling_rejects_singular_and_out_of_range():
    with pytest.raises(SingularParameterError):
        coupling_from_transition(0.5)
    for m in (0.0, -0.2, 1.5):
        with pytest.raises(ParameterError):
            coupling_from_transition(m)
