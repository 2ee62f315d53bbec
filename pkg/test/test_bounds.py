"""Closed-form limits against an independent math-module oracle."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kennedytes.bounds import helstrom_error, improvement_db, sql_error
from kennedytes.models import SignalIntensity

GRID = [0, 0.1, 0.5, 1, 1.5, 4.8, 7.5, 10]


def _sql_oracle(x):
    return 0.5 * math.erfc(math.sqrt(2 * x))


def _helstrom_oracle(x):
    # (1 - sqrt(1 - y)) / 2 with the subtraction done by expm1/log1p.
    y = math.exp(-4 * x)
    if y == 1.0:
        return 0.5
    return -math.expm1(0.5 * math.log1p(-y)) / 2


@pytest.mark.parametrize("x", GRID)
def test_sql_matches_erfc(x):
    assert sql_error(x) == pytest.approx(_sql_oracle(x), rel=1e-10)


@pytest.mark.parametrize("x", GRID)
def test_helstrom_matches_oracle(x):
    assert helstrom_error(x) == pytest.approx(_helstrom_oracle(x), rel=1e-10)


def test_known_values():
    assert sql_error(0) == 0.5
    assert helstrom_error(0) == 0.5
    assert sql_error(1) == pytest.approx(0.0227501319, rel=1e-8)
    assert helstrom_error(1) == pytest.approx(0.00460, rel=5e-3)
    assert 1e-6 < sql_error(4.8) < 1e-5


def test_helstrom_stays_positive_for_bright_signals():
    assert 0 < helstrom_error(10) <= math.exp(-40)


def test_accepts_signal_intensity():
    assert sql_error(SignalIntensity(alpha_sq=1.5)) == sql_error(1.5)


@pytest.mark.parametrize("bad", [-1e-9, -1, float("nan"), float("inf")])
def test_rejects_invalid_intensity(bad):
    with pytest.raises(ValueError):
        sql_error(bad)
    with pytest.raises(ValueError):
        helstrom_error(bad)


@given(st.floats(0, 12), st.floats(0, 12))
def test_limits_decrease_and_helstrom_is_below_sql(a, b):
    lo, hi = min(a, b), max(a, b)
    assert sql_error(hi) <= sql_error(lo)
    assert helstrom_error(hi) <= helstrom_error(lo)
    assert helstrom_error(lo) <= sql_error(lo)


def test_improvement_db():
    assert improvement_db(0.1, 0.1) == 0
    assert improvement_db(0.01, 0.1) == pytest.approx(10)
    assert improvement_db(0.1, 0.01) == pytest.approx(-10)


@pytest.mark.parametrize("p_err,p_ref", [(0, 0.1), (-0.1, 0.1), (0.1, 0), (1.5, 0.1)])
def test_improvement_rejects_non_probabilities(p_err, p_ref):
    with pytest.raises(ValueError):
        improvement_db(p_err, p_ref)
