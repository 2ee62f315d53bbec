"""One Monte Carlo discrimination experiment at a single (alpha, beta)."""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.stats import beta as beta_distribution

from ..bounds import helstrom_error, improvement_db, sql_error
from ..discriminator import expected_error_ideal_counter
from ..io import write_histogram_csv
from ..models import ExperimentConfig, ExperimentResult, SignalIntensity
from ..optimizer import optimal_displacement
from ..photon_statistics import PhotonSource
from .detectors import get_detector
from .parallel import PHASE_EVALUATION, RunPlan, stream

log = logging.getLogger(__name__)

# Confidence of the upper bound reported when no errors were observed.
ZERO_ERROR_CONFIDENCE = 0.95


def counting_stderr(errors: int, trials: int) -> float:
    """sqrt(p(1-p)/N), or the Clopper-Pearson 95% upper bound when no errors occurred."""
    if trials < 1 or not 0 <= errors <= trials:
        raise ValueError(f"need 0 <= errors <= trials and trials >= 1, got {errors}/{trials}")
    if errors == 0:
        return float(beta_distribution.ppf(1 - (1 - ZERO_ERROR_CONFIDENCE) / 2, 1, trials))
    p = errors / trials
    return math.sqrt(p * (1 - p) / trials)


def resolve_beta(config: ExperimentConfig, alpha: float) -> float:
    """Displacement amplitude for ``config``: the fixed value or the ideal-counter optimum."""
    if config.beta_mode == "fixed":
        return math.sqrt(config.beta_sq)
    params = config.params
    return optimal_displacement(alpha, params, with_dark=params.has_dark).beta_opt


def _improvement(p_err: float, p_ref: float) -> Optional[float]:
    if p_err <= 0 or p_ref <= 0:
        return None
    return improvement_db(min(p_err, 1.0), p_ref)


def _evaluation_errors(task) -> int:
    detector, source, n, seed, key = task
    rng = stream(seed, key)
    plus = rng.random(n) < 0.5
    photons = source.sample(plus, rng)
    return detector.count_errors(plus, photons, rng)


def run_experiment(
    config: ExperimentConfig,
    *,
    beta: Optional[float] = None,
    point: int = 0,
    beta_relative: Optional[float] = None,
) -> ExperimentResult:
    """Train the configured detector, then tally MAP errors over the evaluation trials.

    ``beta`` overrides the displacement implied by the config; ``point`` selects the family of
    random streams, so every point of a sweep is independent yet reproducible.
    """
    alpha = SignalIntensity(alpha_sq=config.alpha_sq).alpha
    if beta is None:
        beta = resolve_beta(config, alpha)
    if not math.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be a finite amplitude >= 0, got {beta!r}")
    params = config.params
    plan = RunPlan(
        seed=config.seed, point=point, chunk_trials=config.chunk_trials, workers=config.workers
    )

    source = PhotonSource.for_receiver(alpha, beta, params)
    detector = get_detector(config.mode, config, alpha, beta)
    log.info(
        "point %d: alpha_sq=%.6g beta_sq=%.6g detector=%s", point, config.alpha_sq, beta**2, detector.name
    )
    detector.train(source, plan)

    chunks = plan.chunks(config.evaluation_trials)
    tasks = [
        (detector, source, n, config.seed, plan.key(PHASE_EVALUATION, i))
        for i, n in enumerate(chunks)
    ]
    errors = int(np.sum(plan.map(_evaluation_errors, tasks), dtype=np.int64))

    histogram = getattr(detector, "histogram", None)
    if config.histogram_dir is not None and histogram is not None:
        write_histogram_csv(Path(config.histogram_dir) / f"histogram_{point:03d}.csv", histogram)

    trials = config.evaluation_trials
    p_err = errors / trials
    stderr = counting_stderr(errors, trials)
    rescaled = config.alpha_sq / params.efficiency
    p_sql = sql_error(rescaled)
    # With no observed errors the improvement is quoted against the upper bound.
    improvement = _improvement(p_err if errors else stderr, p_sql)
    log.debug("point %d: %d errors in %d trials", point, errors, trials)

    return ExperimentResult(
        alpha_sq=config.alpha_sq,
        alpha_sq_rescaled=rescaled,
        beta_sq=beta**2,
        beta_relative=beta_relative,
        p_err=p_err,
        p_err_stderr=stderr,
        p_err_analytic=expected_error_ideal_counter(alpha, beta, params, with_dark=params.has_dark),
        errors=errors,
        trials=trials,
        p_sql=p_sql,
        p_helstrom=helstrom_error(rescaled),
        improvement_db=improvement,
        mode=config.mode,
        seed=config.seed,
    )
