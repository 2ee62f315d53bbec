"""Histogram estimates of the score conditionals P(s | +/-alpha, beta)."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..models import ConditionalDistribution, HistogramConfig, ScoreHistogram


def _as_scores(values, name: str) -> np.ndarray:
    scores = np.asarray(values, dtype=float).ravel()
    if scores.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(scores)):
        raise ValueError(f"{name} contains non-finite scores")
    return scores


def _bin_count(pooled: np.ndarray, lo: float, hi: float, config: HistogramConfig) -> int:
    """Freedman-Diaconis bin count, clamped to [min_bins, max_bins]."""
    q25, q75 = np.percentile(pooled, [25, 75])
    width = 2.0 * (q75 - q25) * pooled.size ** (-1.0 / 3.0)
    n = math.ceil((hi - lo) / width) if width > 0 else config.min_bins
    return int(min(max(n, config.min_bins), config.max_bins))


def build_histogram(
    scores_plus, scores_minus, config: Optional[HistogramConfig] = None
) -> ScoreHistogram:
    """Count both branches' scores on common bins spanning the pooled range."""
    config = config or HistogramConfig()
    plus = _as_scores(scores_plus, "scores_plus")
    minus = _as_scores(scores_minus, "scores_minus")
    pooled = np.concatenate([plus, minus])
    lo, hi = float(pooled.min()), float(pooled.max())
    if hi <= lo:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, _bin_count(pooled, lo, hi, config) + 1)
    counts_plus, _ = np.histogram(plus, bins=edges)
    counts_minus, _ = np.histogram(minus, bins=edges)
    return ScoreHistogram(edges=edges, counts_plus=counts_plus, counts_minus=counts_minus)


def histogram_conditional(hist: ScoreHistogram, smoothing: float = 0.5) -> ConditionalDistribution:
    """Normalise each branch after adding ``smoothing`` pseudo-counts to every bin."""
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    plus = hist.counts_plus + smoothing
    minus = hist.counts_minus + smoothing
    return ConditionalDistribution(p_plus=plus / plus.sum(), p_minus=minus / minus.sum())


def estimate_conditional(
    scores_plus, scores_minus, bins: Optional[HistogramConfig] = None
) -> ConditionalDistribution:
    """Smoothed empirical P(s | +/-alpha, beta) over score-bin indices."""
    bins = bins or HistogramConfig()
    return histogram_conditional(build_histogram(scores_plus, scores_minus, bins), bins.smoothing)


def locate_bins(hist: ScoreHistogram, scores) -> np.ndarray:
    """Bin index for each score.

    Scores outside the trained range go to the nearest edge bin; edge bins always hold the
    pooled training extremes, so that is the nearest populated bin.
    """
    idx = np.searchsorted(hist.edges, np.asarray(scores, dtype=float), side="right") - 1
    return np.clip(idx, 0, hist.n_bins - 1)
