"""Grid plus golden-section search for the optimal displacement amplitude."""

from __future__ import annotations

import logging
import math
from typing import Callable, List, Tuple

import numpy as np

from ..discriminator import expected_error_ideal_counter
from ..errors import NumericalError
from ..models import Optimum, ReceiverParams

log = logging.getLogger(__name__)

GRID_POINTS = 200
DEFAULT_TOL = 1e-4
# Objective values within this relative distance of the minimum count as ties.
TIE_RTOL = 1e-12

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def beta_upper_bound(alpha: float) -> float:
    """Search interval is [0, 2 alpha + 3]."""
    return 2.0 * alpha + 3.0


def nulling_displacement(alpha: float, params: ReceiverParams) -> float:
    """Displacement minimising N-: xi sqrt(T) alpha."""
    return params.visibility * math.sqrt(params.transmissivity) * alpha


def local_minima(values: np.ndarray) -> List[int]:
    """Grid indices no higher than either neighbour, skipping the interior of flat runs."""
    values = np.asarray(values, dtype=float)
    left = np.concatenate([[np.inf], values[:-1]])
    right = np.concatenate([values[1:], [np.inf]])
    is_min = (values <= left) & (values <= right) & ((values < left) | (values < right))
    return np.flatnonzero(is_min).tolist()


def golden_section(
    f: Callable[[float], float], a: float, b: float, tol: float
) -> Tuple[float, float]:
    """Shrink [a, b] around a minimum of ``f`` until it is narrower than ``tol``.

    Returns the better interior point and its value.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    while h > tol:
        if yc <= yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
    return (c, yc) if yc <= yd else (d, yd)


def optimal_displacement(
    alpha: float,
    params: ReceiverParams,
    tol: float = DEFAULT_TOL,
    *,
    with_dark: bool = False,
    grid_points: int = GRID_POINTS,
) -> Optimum:
    """Minimise ``expected_error_ideal_counter(alpha, beta, params)`` over beta in [0, 2 alpha + 3].

    Every local minimum of the coarse grid is refined by golden-section search, as is the cell
    around the nulling displacement. The lowest candidate wins, the smallest beta among ties.
    """
    if not math.isfinite(alpha) or alpha < 0:
        raise ValueError(f"alpha must be a finite amplitude >= 0, got {alpha!r}")
    if not math.isfinite(tol) or tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    if grid_points < 3:
        raise ValueError("grid_points must be >= 3")

    evaluations = 0

    def objective(beta: float) -> float:
        nonlocal evaluations
        evaluations += 1
        value = expected_error_ideal_counter(alpha, beta, params, with_dark)
        if not math.isfinite(value):
            raise NumericalError(f"objective is {value!r} at alpha={alpha!r}, beta={beta!r}")
        return value

    upper = beta_upper_bound(alpha)
    grid = np.linspace(0.0, upper, grid_points)
    values = np.array([objective(float(b)) for b in grid])
    candidates: List[Tuple[float, float]] = list(zip(grid.tolist(), values.tolist()))

    for i in local_minima(values):
        lo = float(grid[max(i - 1, 0)])
        hi = float(grid[min(i + 1, grid_points - 1)])
        candidates.append(golden_section(objective, lo, hi, tol))

    # The valley around N- = 0 can be far narrower than one grid cell.
    null = nulling_displacement(alpha, params)
    step = float(grid[1] - grid[0])
    candidates.append((null, objective(null)))
    candidates.append(golden_section(objective, max(null - step, 0.0), min(null + step, upper), tol))

    lowest = min(p for _, p in candidates)
    beta_opt, p_min = min(
        ((b, p) for b, p in candidates if p <= lowest * (1 + TIE_RTOL)), key=lambda c: c[0]
    )
    beta_opt, p_min = float(beta_opt), float(p_min)

    log.debug(
        "alpha=%.6g beta_opt=%.6g p_err_min=%.6g after %d evaluations",
        alpha,
        beta_opt,
        p_min,
        evaluations,
    )
    return Optimum(beta_opt=beta_opt, p_err_min=p_min, evaluations=evaluations)
