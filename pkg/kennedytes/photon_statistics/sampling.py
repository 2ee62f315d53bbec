"""Random photon-number draws matching the analytic (optionally dark-augmented) model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..models import ReceiverParams
from .poisson import dark_count_spectrum, displaced_means, pair_truncation


@dataclass(frozen=True)
class PhotonSource:
    """Draws absorbed photon numbers for either branch of the receiver.

    With probability d / (1 + d), d the total dark mass, a trial's outcome is replaced by a
    draw from the dark spectrum; that is exactly the renormalised augmented distribution.
    """

    n_plus: float
    n_minus: float
    dark_spectrum: np.ndarray

    @classmethod
    def for_receiver(cls, alpha: float, beta: float, params: ReceiverParams) -> "PhotonSource":
        means = displaced_means(alpha, beta, params)
        n_max = pair_truncation(means, params, with_dark=params.has_dark)
        return cls(
            n_plus=means.n_plus,
            n_minus=means.n_minus,
            dark_spectrum=dark_count_spectrum(n_max, params),
        )

    @property
    def n_max(self) -> int:
        return self.dark_spectrum.size - 1

    @property
    def dark_weight(self) -> float:
        total = float(self.dark_spectrum.sum())
        return total / (1.0 + total)

    def sample(self, plus: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Photon numbers for trials whose branch is ``plus`` (True) or minus (False)."""
        plus = np.asarray(plus, dtype=bool)
        photons = rng.poisson(np.where(plus, self.n_plus, self.n_minus))
        total = float(self.dark_spectrum.sum())
        if total > 0:
            dark = rng.random(plus.size) < self.dark_weight
            k = int(np.count_nonzero(dark))
            if k:
                photons[dark] = rng.choice(
                    self.dark_spectrum.size, size=k, p=self.dark_spectrum / total
                )
        return photons
