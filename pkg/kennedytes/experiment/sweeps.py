"""Displacement and intensity sweeps built from repeated ``run_experiment`` calls."""

from __future__ import annotations

import logging
import math
from typing import List, Sequence

from ..models import ExperimentConfig, ExperimentResult, SignalIntensity
from ..optimizer import optimal_displacement
from .runner import run_experiment

log = logging.getLogger(__name__)


def sweep_beta(
    alpha_sq: float, relative_grid: Sequence[float], config: ExperimentConfig
) -> List[ExperimentResult]:
    """Run at beta = m * beta_opt for every multiplier m of ``relative_grid``.

    beta_opt is the ideal-counter optimum at ``alpha_sq``, with dark counts when the receiver has
    them, so the multiplier 1.0 reproduces ``run_experiment`` in optimize mode.
    """
    grid = [float(m) for m in relative_grid]
    if not grid or any(not math.isfinite(m) or m <= 0 for m in grid):
        raise ValueError("relative_grid must be a non-empty list of finite multipliers > 0")
    intensity = SignalIntensity(alpha_sq=alpha_sq)
    point_config = config.model_copy(update={"alpha_sq": intensity.alpha_sq})
    params = config.params
    beta_opt = optimal_displacement(intensity.alpha, params, with_dark=params.has_dark).beta_opt
    log.info("sweep_beta: alpha_sq=%.6g beta_opt_sq=%.6g, %d points", alpha_sq, beta_opt**2, len(grid))
    return [
        run_experiment(point_config, beta=m * beta_opt, point=i, beta_relative=m)
        for i, m in enumerate(grid)
    ]


def sweep_alpha(grid: Sequence[float], config: ExperimentConfig) -> List[ExperimentResult]:
    """One run per intensity, with beta chosen by ``config.beta_mode``."""
    intensities = [SignalIntensity(alpha_sq=x).alpha_sq for x in grid]
    if not intensities:
        raise ValueError("grid must contain at least one intensity")
    results = []
    for i, x in enumerate(intensities):
        results.append(run_experiment(config.model_copy(update={"alpha_sq": x}), point=i))
        log.debug("sweep_alpha: %d/%d done", i + 1, len(intensities))
    return results
