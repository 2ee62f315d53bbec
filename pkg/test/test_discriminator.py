"""MAP decisions, error probability and the ideal photon-counter error."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kennedytes.bounds import helstrom_error
from kennedytes.discriminator import (
    decision_table,
    error_probability,
    expected_error_ideal_counter,
    ideal_counter_distribution,
    map_decide,
)
from kennedytes.errors import UnknownOutcomeError
from kennedytes.models import ConditionalDistribution, Decision, ReceiverParams
from kennedytes.optimizer import optimal_displacement


def _dist(p_plus, p_minus, labels=None):
    return ConditionalDistribution(labels=labels, p_plus=p_plus, p_minus=p_minus)


def _poisson_oracle(n, mean):
    if mean == 0:
        return 1.0 if n == 0 else 0.0
    if n <= 20:
        return mean**n * math.exp(-mean) / math.factorial(n)
    return math.exp(n * math.log(mean) - mean - math.lgamma(n + 1))


def _ideal_error_oracle(alpha, beta, t, xi, n_max=400):
    cross = 2 * xi * math.sqrt(t) * alpha * beta
    n_plus = t * alpha**2 + beta**2 + cross
    n_minus = max(t * alpha**2 + beta**2 - cross, 0.0)
    return 0.5 * sum(
        min(_poisson_oracle(n, n_plus), _poisson_oracle(n, n_minus)) for n in range(n_max + 1)
    )


def test_map_decide_prefers_the_more_likely_branch():
    d = _dist([0.7, 0.3], [0.2, 0.8])
    assert map_decide(0, d) == Decision.PLUS
    assert map_decide(1, d) == Decision.MINUS


def test_ties_go_to_plus():
    d = _dist([0.5, 0.5], [0.5, 0.5])
    assert map_decide(0, d) == Decision.PLUS
    assert decision_table(d).all()
    assert error_probability(d) == pytest.approx(0.5)


def test_map_decide_uses_labels():
    d = _dist([0.1, 0.9], [0.6, 0.4], labels=[7, 3])
    assert map_decide(7, d) == Decision.MINUS
    assert map_decide(3, d) == Decision.PLUS
    with pytest.raises(UnknownOutcomeError) as info:
        map_decide(0, d)
    assert info.value.outcome == 0


def test_error_probability_extremes():
    assert error_probability(_dist([1, 0], [0, 1])) == 0
    assert error_probability(_dist([0.25] * 4, [0.25] * 4)) == pytest.approx(0.5)


def test_conditional_rejects_mismatched_support():
    with pytest.raises(ValueError):
        _dist([0.5, 0.5], [1.0])
    with pytest.raises(ValueError):
        _dist([0.5, 0.5], [0.5, 0.5], labels=[1, 1])


def test_map_equals_exhaustive_minimum_over_decision_rules():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        k = int(rng.integers(1, 13))
        p_plus = rng.dirichlet(np.ones(k))
        p_minus = rng.dirichlet(np.ones(k))
        rules = np.array(list(itertools.product([False, True], repeat=k)))
        # A rule is a vector "decide plus"; it errs on p_minus where it says plus and vice versa.
        errors = 0.5 * (rules @ p_minus + (~rules) @ p_plus)
        assert error_probability(_dist(p_plus, p_minus)) == pytest.approx(errors.min(), abs=1e-12)


@given(st.data())
def test_error_is_invariant_under_relabeling(data):
    k = data.draw(st.integers(1, 10))
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    p_plus = rng.dirichlet(np.ones(k))
    p_minus = rng.dirichlet(np.ones(k))
    perm = rng.permutation(k)
    a = error_probability(_dist(p_plus, p_minus))
    b = error_probability(_dist(p_plus[perm], p_minus[perm]))
    assert a == pytest.approx(b, abs=1e-15)
    assert 0 <= a <= 0.5


def test_ideal_counter_error_matches_direct_summation():
    rng = np.random.default_rng(6)
    for _ in range(50):
        alpha = math.sqrt(rng.uniform(0, 10))
        beta = rng.uniform(0, 2 * alpha + 1)
        t = rng.uniform(0.5, 1.0)
        xi = rng.uniform(0.9, 1.0)
        params = ReceiverParams(transmissivity=t, visibility=xi)
        expected = _ideal_error_oracle(alpha, beta, t, xi)
        assert expected_error_ideal_counter(alpha, beta, params) == pytest.approx(expected, rel=1e-8)


def test_ideal_counter_reference_point():
    params = ReceiverParams(transmissivity=0.982, visibility=0.998)
    p = expected_error_ideal_counter(math.sqrt(1.5), math.sqrt(1.51), params)
    assert 3e-3 < p < 6e-3


def test_no_signal_means_coin_flip():
    params = ReceiverParams()
    assert expected_error_ideal_counter(0.0, 1.0, params) == pytest.approx(0.5)


def test_dark_counts_raise_the_error_floor():
    base = ReceiverParams(transmissivity=0.982, visibility=0.9985)
    dark = base.model_copy(update={"dark_high_rate": 3e-8})
    alpha, beta = math.sqrt(10), math.sqrt(10)
    clean = expected_error_ideal_counter(alpha, beta, base, with_dark=True)
    noisy = expected_error_ideal_counter(alpha, beta, dark, with_dark=True)
    assert noisy > clean
    assert noisy - clean == pytest.approx(1.5e-8, rel=0.2)


def test_ideal_counter_distribution_shares_one_support():
    params = ReceiverParams(dark_high_rate=1e-6, dark_high_threshold=50)
    d = ideal_counter_distribution(1.0, 1.0, params, with_dark=True)
    assert d.size == 52
    assert d.p_plus.sum() == pytest.approx(1.0)


def test_worked_example():
    assert error_probability(_dist([0.8, 0.2], [0.3, 0.7])) == pytest.approx(0.25)


@given(st.data())
def test_error_is_symmetric_in_the_branches(data):
    k = data.draw(st.integers(1, 10))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    p_plus = rng.dirichlet(np.ones(k))
    p_minus = rng.dirichlet(np.ones(k))
    assert error_probability(_dist(p_plus, p_minus)) == error_probability(_dist(p_minus, p_plus))


@given(st.data())
def test_decisions_ignore_a_common_scale(data):
    k = data.draw(st.integers(1, 10))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    scale = data.draw(st.floats(1e-3, 1e3))
    weights_plus = rng.dirichlet(np.ones(k))
    weights_minus = rng.dirichlet(np.ones(k))
    d = _dist(weights_plus / weights_plus.sum(), weights_minus / weights_minus.sum())
    scaled = _dist(
        weights_plus * scale / (weights_plus * scale).sum(),
        weights_minus * scale / (weights_minus * scale).sum(),
    )
    clear = np.abs(d.p_plus - d.p_minus) > 1e-9
    for n in np.flatnonzero(clear):
        assert map_decide(int(n), d) == map_decide(int(n), scaled)


@pytest.mark.parametrize("alpha_sq", [0.2, 0.5, 1.0, 2.0, 4.0])
def test_optimised_counter_never_beats_helstrom(alpha_sq):
    params = ReceiverParams(transmissivity=1.0, visibility=1.0, efficiency=1.0)
    alpha = math.sqrt(alpha_sq)
    opt = optimal_displacement(alpha, params)
    assert expected_error_ideal_counter(alpha, opt.beta_opt, params) >= helstrom_error(alpha_sq)


@pytest.mark.parametrize("alpha_sq", [0.5, 1.5, 4.8])
def test_no_click_decides_minus_at_the_optimum(alpha_sq):
    params = ReceiverParams(transmissivity=0.982, visibility=0.998)
    alpha = math.sqrt(alpha_sq)
    beta = optimal_displacement(alpha, params).beta_opt
    d = ideal_counter_distribution(alpha, beta, params)
    assert map_decide(0, d) == Decision.MINUS
