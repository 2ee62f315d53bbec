"""Displaced means, truncated Poisson distributions and dark-count augmentation."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.special import gammaln, xlogy

from ..models import DisplacedMeans, PhotonDistribution, ReceiverParams

# n_max = max(TRUNCATION_FLOOR, ceil(mean + TRUNCATION_SIGMAS * sqrt(mean))) keeps the
# dropped tail below 1e-12 for means up to several hundred photons.
TRUNCATION_FLOOR = 30
TRUNCATION_SIGMAS = 12.0


def _amplitude(value: float, name: str) -> float:
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"{name} must be a finite amplitude >= 0, got {value!r}")
    return float(value)


def displaced_means(alpha: float, beta: float, params: ReceiverParams) -> DisplacedMeans:
    """N+/- = T alpha^2 + beta^2 +/- 2 xi sqrt(T) alpha beta.

    Amplitudes are real and non-negative; the binary phase is the +/- branch.
    """
    alpha = _amplitude(alpha, "alpha")
    beta = _amplitude(beta, "beta")
    signal = math.sqrt(params.transmissivity) * alpha
    mismatch = 2.0 * (1.0 - params.visibility) * signal * beta
    # Written as a square plus a non-negative term so N- never cancels below zero.
    return DisplacedMeans(
        n_plus=(signal + beta) ** 2 - mismatch,
        n_minus=(signal - beta) ** 2 + mismatch,
    )


def truncation_bound(mean: float) -> int:
    """Largest photon number kept for a Poisson distribution of the given mean."""
    if not math.isfinite(mean) or mean < 0:
        raise ValueError(f"mean must be finite and >= 0, got {mean!r}")
    return max(TRUNCATION_FLOOR, math.ceil(mean + TRUNCATION_SIGMAS * math.sqrt(mean)))


def pair_truncation(means: DisplacedMeans, params: ReceiverParams, with_dark: bool = False) -> int:
    """Shared support bound for both branches (and room above the high-energy dark threshold)."""
    n_max = truncation_bound(max(means.n_plus, means.n_minus))
    if with_dark:
        n_max = max(n_max, params.dark_high_threshold + 1, len(params.dark_low_profile))
    return n_max


def poisson_distribution(mean: float, n_max: Optional[int] = None) -> PhotonDistribution:
    """Poisson probabilities mean^n e^-mean / n! for n = 0..n_max, renormalised.

    Evaluated in log space so large n neither overflows the factorial nor underflows early.
    """
    if not math.isfinite(mean) or mean < 0:
        raise ValueError(f"mean must be finite and >= 0, got {mean!r}")
    if n_max is None:
        n_max = truncation_bound(mean)
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    n = np.arange(n_max + 1)
    pmf = np.exp(xlogy(n, mean) - mean - gammaln(n + 1))
    return PhotonDistribution(probabilities=pmf / pmf.sum())


def dark_count_spectrum(n_max: int, params: ReceiverParams) -> np.ndarray:
    """Dark-event probability mass per photon number 0..n_max (not normalised).

    Low-energy events put ``dark_low_rate`` on n = 1..len(profile) with the configured profile;
    high-energy events spread ``dark_high_rate`` uniformly over (threshold, n_max].
    """
    spectrum = np.zeros(n_max + 1)
    if params.dark_low_rate > 0:
        profile = np.asarray(params.dark_low_profile, dtype=float)
        if n_max < profile.size:
            raise ValueError(f"n_max={n_max} cannot hold the low-energy dark profile")
        spectrum[1 : profile.size + 1] += params.dark_low_rate * profile / profile.sum()
    if params.dark_high_rate > 0:
        first = params.dark_high_threshold + 1
        if n_max < first:
            raise ValueError(
                f"n_max={n_max} leaves no bins above dark_high_threshold={params.dark_high_threshold}"
            )
        spectrum[first:] += params.dark_high_rate / (n_max - first + 1)
    return spectrum


def augment_dark_counts(dist: PhotonDistribution, params: ReceiverParams) -> PhotonDistribution:
    """Add the dark-count spectrum to ``dist`` and renormalise."""
    spectrum = dark_count_spectrum(dist.n_max, params)
    if not spectrum.any():
        return dist
    augmented = dist.probabilities + spectrum
    return PhotonDistribution(probabilities=augmented / augmented.sum())
