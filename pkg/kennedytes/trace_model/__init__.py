"""Synthetic TES detector: traces, matched filtering and score-based conditionals.

Traces share one pulse shape scaled by the absorbed energy (linear up to ``n_sat`` photons,
compressed above) plus white Gaussian noise. Each trace is reduced to a scalar score
s = sum_i V(t_i) V0(t_i) dt against a template V0 averaged from few-photon traces. Scores are
used directly in the MAP rule via smoothed histograms of training scores; binning scores into
photon numbers is kept only for calibration.
"""

from .histogram import build_histogram, estimate_conditional, histogram_conditional, locate_bins
from .tes import (
    DEFAULT_BATCH,
    bin_scores_to_photon_numbers,
    build_matched_filter,
    calibrate_spacing,
    effective_amplitude,
    filter_score,
    mean_photon_number,
    pulse_template,
    score_traces,
    simulate_trace,
    simulate_traces,
    trace_height,
)

__all__ = [
    "simulate_trace",
    "simulate_traces",
    "build_matched_filter",
    "filter_score",
    "score_traces",
    "trace_height",
    "estimate_conditional",
    "build_histogram",
    "histogram_conditional",
    "locate_bins",
    "bin_scores_to_photon_numbers",
    "calibrate_spacing",
    "mean_photon_number",
    "pulse_template",
    "effective_amplitude",
    "DEFAULT_BATCH",
]
