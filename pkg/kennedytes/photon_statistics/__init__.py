"""Photon-number statistics of the displaced signal, including dark counts.

The +alpha branch is displaced away from the vacuum and the -alpha branch towards it; both are
Poissonian with means N+ and N-. Distributions are truncated where the tail mass drops below
1e-12 and renormalised, so every vector handed to the discriminator sums to one.

Dark counts are a mixture component: a low-energy population on small photon numbers and a rare
high-energy population spread above a threshold. ``PhotonSource`` draws from exactly the same
mixture that ``augment_dark_counts`` describes analytically.
"""

from .poisson import (
    augment_dark_counts,
    dark_count_spectrum,
    displaced_means,
    pair_truncation,
    poisson_distribution,
    truncation_bound,
)
from .sampling import PhotonSource

__all__ = [
    "displaced_means",
    "poisson_distribution",
    "augment_dark_counts",
    "dark_count_spectrum",
    "truncation_bound",
    "pair_truncation",
    "PhotonSource",
]
