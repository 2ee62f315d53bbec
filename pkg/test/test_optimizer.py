"""Displacement optimisation on the ideal-counter objective."""

import math

import numpy as np
import pytest

from kennedytes.discriminator import expected_error_ideal_counter
from kennedytes.errors import NumericalError
from kennedytes.models import ReceiverParams
from kennedytes.optimizer import (
    displacement,
    golden_section,
    local_minima,
    nulling_displacement,
    optimal_displacement,
)

MEASURED = ReceiverParams(transmissivity=0.982, visibility=0.998)
PERFECT = ReceiverParams(transmissivity=1.0, visibility=1.0, efficiency=1.0)


def test_reference_operating_point():
    opt = optimal_displacement(math.sqrt(1.5), MEASURED)
    assert 1.36 <= opt.beta_sq <= 1.66
    assert opt.evaluations > displacement.GRID_POINTS


def test_optimum_tends_to_alpha_for_bright_signals():
    alpha = 5.0
    opt = optimal_displacement(alpha, PERFECT)
    assert 0.95 <= opt.beta_opt / alpha <= 1.05


def test_flat_objective_resolves_to_smallest_beta():
    opt = optimal_displacement(0.0, MEASURED)
    assert opt.beta_opt == 0.0
    assert opt.p_err_min == pytest.approx(0.5)


def test_optimum_beats_random_displacements():
    rng = np.random.default_rng(11)
    for alpha_sq in (0.5, 1.5, 2.0, 4.8):
        alpha = math.sqrt(alpha_sq)
        opt = optimal_displacement(alpha, MEASURED)
        for beta in rng.uniform(0, 2 * alpha + 3, size=100):
            assert opt.p_err_min <= expected_error_ideal_counter(alpha, float(beta), MEASURED) * (1 + 1e-5)


def test_optimum_matches_its_reported_error():
    alpha = math.sqrt(1.5)
    opt = optimal_displacement(alpha, MEASURED)
    assert opt.p_err_min == pytest.approx(
        expected_error_ideal_counter(alpha, opt.beta_opt, MEASURED), rel=1e-12
    )


def _dense_minimum(alpha, params, points=20_001):
    betas = np.linspace(0, 2 * alpha + 3, points)
    values = [expected_error_ideal_counter(alpha, float(b), params) for b in betas]
    i = int(np.argmin(values))
    return float(betas[i]), values[i]


@pytest.mark.parametrize(
    "alpha_sq, t, xi",
    [(1.5, 0.982, 0.998), (0.5, 1.0, 1.0), (3.0, 1.0, 1.0), (5.0, 1.0, 1.0), (4.8, 0.982, 0.9985)],
)
def test_optimum_is_no_worse_than_a_dense_grid(alpha_sq, t, xi):
    params = ReceiverParams(transmissivity=t, visibility=xi)
    alpha = math.sqrt(alpha_sq)
    opt = optimal_displacement(alpha, params)
    _, p_dense = _dense_minimum(alpha, params)
    assert opt.p_err_min <= p_dense * (1 + 1e-3)


@pytest.mark.parametrize("alpha_sq", [1.0, 2.0, 3.5, 5.0, 7.0])
def test_optimum_beats_the_nulling_receiver(alpha_sq):
    # With perfect transmission and visibility, beta = alpha gives exactly exp(-4 alpha^2) / 2.
    alpha = math.sqrt(alpha_sq)
    opt = optimal_displacement(alpha, PERFECT)
    assert opt.p_err_min <= 0.5 * math.exp(-4 * alpha_sq) * (1 + 1e-9)


def test_reference_point_finds_the_narrow_valley():
    alpha = math.sqrt(1.5)
    opt = optimal_displacement(alpha, MEASURED)
    beta_dense, p_dense = _dense_minimum(alpha, MEASURED)
    assert abs(opt.beta_opt - beta_dense) < 2 * (2 * alpha + 3) / 20_000
    assert opt.p_err_min <= p_dense * (1 + 1e-3)


def test_error_at_optimum_does_not_increase_with_visibility():
    alpha = math.sqrt(1.5)
    errors = [
        optimal_displacement(alpha, ReceiverParams(transmissivity=0.982, visibility=float(xi))).p_err_min
        for xi in np.linspace(0.95, 1.0, 11)
    ]
    assert all(b <= a * (1 + 1e-5) for a, b in zip(errors, errors[1:]))


def test_local_minima_of_a_grid():
    assert local_minima(np.array([3.0, 1.0, 2.0, 0.5, 4.0])) == [1, 3]
    assert local_minima(np.array([0.5, 0.5, 0.5])) == [0, 2]
    assert local_minima(np.array([1.0, 2.0, 3.0])) == [0]


def test_nulling_displacement():
    assert nulling_displacement(2.0, PERFECT) == 2.0
    assert nulling_displacement(2.0, MEASURED) == pytest.approx(0.998 * math.sqrt(0.982) * 2.0)


def test_deterministic():
    a = optimal_displacement(1.1, MEASURED)
    b = optimal_displacement(1.1, MEASURED)
    assert a == b


def test_error_at_optimum_decreases_with_intensity():
    params = ReceiverParams(transmissivity=0.982, visibility=0.9985)
    errors = [optimal_displacement(math.sqrt(x), params).p_err_min for x in np.linspace(0.1, 6, 25)]
    assert np.all(np.diff(errors) < 0)


def test_golden_section_finds_parabola_minimum():
    x, fx = golden_section(lambda b: (b - 1.3) ** 2 + 0.25, 0.0, 4.0, 1e-6)
    assert x == pytest.approx(1.3, abs=1e-5)
    assert fx == pytest.approx(0.25, abs=1e-9)


def test_non_finite_objective_raises(monkeypatch):
    monkeypatch.setattr(displacement, "expected_error_ideal_counter", lambda *a: float("nan"))
    with pytest.raises(NumericalError):
        optimal_displacement(1.0, MEASURED)


@pytest.mark.parametrize("alpha", [-0.1, float("nan"), float("inf")])
def test_rejects_invalid_alpha(alpha):
    with pytest.raises(ValueError):
        optimal_displacement(alpha, MEASURED)


def test_rejects_non_positive_tolerance():
    with pytest.raises(ValueError):
        optimal_displacement(1.0, MEASURED, tol=0)
