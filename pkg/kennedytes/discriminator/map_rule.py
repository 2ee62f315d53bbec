"""MAP rule over discrete conditionals, and the ideal photon-counter error."""

from __future__ import annotations

import numpy as np

from ..errors import UnknownOutcomeError
from ..models import ConditionalDistribution, Decision, ReceiverParams
from ..photon_statistics import (
    augment_dark_counts,
    displaced_means,
    pair_truncation,
    poisson_distribution,
)


def map_decide(outcome: int, dist: ConditionalDistribution) -> Decision:
    """Branch assigned to ``outcome``; plus unless minus is strictly more likely."""
    hits = np.flatnonzero(dist.labels == outcome)
    if hits.size == 0:
        raise UnknownOutcomeError(outcome)
    i = hits[0]
    return Decision.PLUS if dist.p_plus[i] >= dist.p_minus[i] else Decision.MINUS


def decision_table(dist: ConditionalDistribution) -> np.ndarray:
    """``map_decide`` for every outcome in support order; True means plus."""
    return dist.p_plus >= dist.p_minus


def error_probability(dist: ConditionalDistribution) -> float:
    """Equal-prior error of the MAP rule on ``dist``, in [0, 0.5]."""
    # The min form equals 1 - sum(max)/2 for normalised inputs but keeps its digits
    # when the error is many orders of magnitude below one.
    return min(0.5, 0.5 * float(np.sum(np.minimum(dist.p_plus, dist.p_minus))))


def ideal_counter_distribution(
    alpha: float, beta: float, params: ReceiverParams, with_dark: bool = False
) -> ConditionalDistribution:
    """Photon-number conditionals of an ideal counter behind the displacement."""
    means = displaced_means(alpha, beta, params)
    n_max = pair_truncation(means, params, with_dark=with_dark)
    plus = poisson_distribution(means.n_plus, n_max)
    minus = poisson_distribution(means.n_minus, n_max)
    if with_dark:
        plus = augment_dark_counts(plus, params)
        minus = augment_dark_counts(minus, params)
    return ConditionalDistribution(p_plus=plus.probabilities, p_minus=minus.probabilities)


def expected_error_ideal_counter(
    alpha: float, beta: float, params: ReceiverParams, with_dark: bool = False
) -> float:
    """Expected discrimination error with ideal photon counting after displacement by ``beta``."""
    return error_probability(ideal_counter_distribution(alpha, beta, params, with_dark))
