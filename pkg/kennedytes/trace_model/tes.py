"""Trace generation, matched filtering and photon-number calibration."""

from __future__ import annotations

import math
from typing import Optional, Sequence, Union

import numpy as np

from ..models import MatchedFilter, TesResponseModel, Trace

# Traces are simulated and scored this many at a time.
DEFAULT_BATCH = 1500


def pulse_template(model: TesResponseModel) -> np.ndarray:
    """Unit-energy difference-of-exponentials pulse sampled at ``model.n_samples`` points."""
    t = np.arange(model.n_samples) * model.dt
    pulse = np.exp(-t / model.tau_fall) - np.exp(-t / model.tau_rise)
    return pulse / math.sqrt(float(np.sum(pulse**2)) * model.dt)


def effective_amplitude(photons, model: TesResponseModel) -> np.ndarray:
    """Pulse amplitude for each photon number: linear to n_sat, compressed above."""
    n = np.asarray(photons, dtype=float)
    compressed = model.n_sat + (n - model.n_sat) * model.compression
    return model.gain * np.where(n <= model.n_sat, n, compressed)


def simulate_traces(
    photons: Union[Sequence[int], np.ndarray],
    model: TesResponseModel,
    rng: np.random.Generator,
    template: Optional[np.ndarray] = None,
) -> np.ndarray:
    """One trace per entry of ``photons``, as rows of a (len(photons), n_samples) array."""
    photons = np.asarray(photons)
    if np.any(photons < 0):
        raise ValueError("photon numbers must be >= 0")
    if template is None:
        template = pulse_template(model)
    samples = effective_amplitude(photons, model)[:, None] * template[None, :]
    if model.noise_rms > 0:
        samples += rng.normal(0.0, model.noise_rms, size=samples.shape)
    return samples


def simulate_trace(n_photons: int, model: TesResponseModel, rng: np.random.Generator) -> Trace:
    """Detector trace for ``n_photons`` absorbed photons; n = 0 is pure noise."""
    if int(n_photons) != n_photons or n_photons < 0:
        raise ValueError(f"n_photons must be an integer >= 0, got {n_photons!r}")
    samples = simulate_traces(np.array([int(n_photons)]), model, rng)[0]
    return Trace(samples=samples, dt=model.dt)


def build_matched_filter(traces: Sequence[Trace]) -> MatchedFilter:
    """Pointwise mean of ``traces``."""
    traces = list(traces)
    if not traces:
        raise ValueError("cannot build a matched filter from no traces")
    length, dt = traces[0].length, traces[0].dt
    for tr in traces[1:]:
        if tr.length != length or not math.isclose(tr.dt, dt, rel_tol=1e-12):
            raise ValueError("traces must share length and sample period")
    return MatchedFilter(template=np.mean(np.stack([t.samples for t in traces]), axis=0), dt=dt)


def _check_compatible(length: int, dt: float, filt: MatchedFilter) -> None:
    if length != filt.length:
        raise ValueError(f"trace length {length} does not match filter length {filt.length}")
    if not math.isclose(dt, filt.dt, rel_tol=1e-12):
        raise ValueError(f"trace period {dt!r} does not match filter period {filt.dt!r}")


def filter_score(trace: Trace, filt: MatchedFilter) -> float:
    """s = sum_i V(t_i) V0(t_i) dt."""
    _check_compatible(trace.length, trace.dt, filt)
    return float(np.dot(trace.samples, filt.template) * filt.dt)


def score_traces(samples: np.ndarray, filt: MatchedFilter) -> np.ndarray:
    """``filter_score`` for every row of a (k, n_samples) array."""
    samples = np.atleast_2d(samples)
    _check_compatible(samples.shape[1], filt.dt, filt)
    return samples @ filt.template * filt.dt


def trace_height(trace: Union[Trace, np.ndarray]) -> Union[float, np.ndarray]:
    """Maximum sample: a cruder score than the matched filter. Row-wise for 2-D input."""
    if isinstance(trace, Trace):
        return float(trace.samples.max())
    return np.atleast_2d(trace).max(axis=1)


def calibrate_spacing(filt: MatchedFilter, model: TesResponseModel) -> float:
    """Score of a noiseless one-photon trace: the per-photon spacing in the linear regime."""
    one = effective_amplitude(1, model) * pulse_template(model)
    _check_compatible(one.size, model.dt, filt)
    return float(np.dot(one, filt.template) * filt.dt)


def bin_scores_to_photon_numbers(scores, spacing: float) -> np.ndarray:
    """round(s / spacing) for every score, clipped at zero photons."""
    if not math.isfinite(spacing) or spacing <= 0:
        raise ValueError(f"spacing must be > 0, got {spacing!r}")
    n = np.floor(np.asarray(scores, dtype=float) / spacing + 0.5).astype(np.int64)
    return np.clip(n, 0, None)


def mean_photon_number(scores, spacing: float) -> float:
    """Average photon number of binned scores, as recorded for a calibration look-up table."""
    n = bin_scores_to_photon_numbers(scores, spacing)
    if n.size == 0:
        raise ValueError("no scores to calibrate")
    return float(n.mean())
