"""Analytic ideal-counter curves against the SQL, and the features read off them."""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from ..bounds import helstrom_error, improvement_db, sql_error
from ..models import CurvePoint, Optimum, ReceiverParams, SignalIntensity
from ..optimizer import optimal_displacement

# Efficiency uncertainty interval used to bracket the improvement.
EFFICIENCY_BOUNDS = (0.90, 1.00)
CROSSOVER_GRID_POINTS = 15


def analytic_error(alpha_sq: float, params: ReceiverParams, with_dark: bool = False) -> Optimum:
    """Ideal-counter error at the optimal displacement for intensity ``alpha_sq``."""
    return optimal_displacement(SignalIntensity(alpha_sq=alpha_sq).alpha, params, with_dark=with_dark)


def _improvement(p_err: float, alpha_sq: float, efficiency: float):
    p_sql = sql_error(alpha_sq / efficiency)
    if p_err <= 0 or p_sql <= 0:
        return None
    return improvement_db(p_err, p_sql)


def expected_curve(
    grid: Sequence[float],
    params: ReceiverParams,
    with_dark: bool = False,
    efficiency_bounds: Tuple[float, float] = EFFICIENCY_BOUNDS,
) -> List[CurvePoint]:
    """Optimal-displacement error, limits and dB improvement per intensity of ``grid``."""
    low, high = efficiency_bounds
    if not 0 < low <= high <= 1:
        raise ValueError(f"efficiency bounds must satisfy 0 < low <= high <= 1, got {efficiency_bounds!r}")
    points = []
    for x in grid:
        opt = analytic_error(x, params, with_dark)
        rescaled = x / params.efficiency
        points.append(
            CurvePoint(
                alpha_sq=x,
                alpha_sq_rescaled=rescaled,
                beta_sq=opt.beta_sq,
                p_err=opt.p_err_min,
                p_sql=sql_error(rescaled),
                p_helstrom=helstrom_error(rescaled),
                improvement_db=_improvement(opt.p_err_min, x, params.efficiency),
                improvement_db_low=_improvement(opt.p_err_min, x, low),
                improvement_db_high=_improvement(opt.p_err_min, x, high),
                with_dark=with_dark,
            )
        )
    return points


def sql_crossover(
    params: ReceiverParams,
    lo: float = 5.0,
    hi: float = 12.0,
    *,
    with_dark: bool = True,
    grid_points: int = CROSSOVER_GRID_POINTS,
) -> float:
    """Intensity where the analytic curve rises above the efficiency-rescaled SQL.

    Raises ``ValueError`` when the curve does not cross the SQL inside [lo, hi].
    """
    if not 0 <= lo < hi:
        raise ValueError(f"need 0 <= lo < hi, got [{lo!r}, {hi!r}]")

    def log_ratio(x: float) -> float:
        p_sql = sql_error(x / params.efficiency)
        return math.log(analytic_error(x, params, with_dark).p_err_min) - math.log(p_sql)

    xs = np.linspace(lo, hi, grid_points)
    values = [log_ratio(float(x)) for x in xs]
    for i in range(grid_points - 1):
        if values[i] <= 0 < values[i + 1]:
            return float(brentq(log_ratio, float(xs[i]), float(xs[i + 1]), xtol=1e-4))
    raise ValueError(f"the error curve does not cross the SQL in [{lo}, {hi}]")


def curve_slope(params: ReceiverParams, a: float, b: float, *, with_dark: bool = True) -> float:
    """Finite-difference slope of the analytic error between intensities ``a`` and ``b``."""
    if a == b:
        raise ValueError("slope needs two distinct intensities")
    pa = analytic_error(a, params, with_dark).p_err_min
    pb = analytic_error(b, params, with_dark).p_err_min
    return (pb - pa) / (b - a)
