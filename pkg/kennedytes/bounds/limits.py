"""SQL, Helstrom bound and decibel improvement for binary phase-shifted coherent states."""

from __future__ import annotations

import math
from typing import Union

from scipy.special import erfc

from ..models import SignalIntensity

Intensity = Union[SignalIntensity, float]


def _intensity(alpha_sq: Intensity) -> float:
    if isinstance(alpha_sq, SignalIntensity):
        return alpha_sq.alpha_sq
    return SignalIntensity(alpha_sq=alpha_sq).alpha_sq


def sql_error(alpha_sq: Intensity) -> float:
    """Error probability of ideal homodyne detection at mean photon number ``alpha_sq``."""
    x = _intensity(alpha_sq)
    # 1 - erf(z) loses every digit in the tail; erfc does not.
    return float(0.5 * erfc(math.sqrt(2.0 * x)))


def helstrom_error(alpha_sq: Intensity) -> float:
    """Minimum error allowed by quantum mechanics for equal priors.

    Evaluated as y / (2 (1 + sqrt(1 - y))) with y = exp(-4|alpha|^2), which equals
    (1 - sqrt(1 - y)) / 2 without cancelling to zero for bright signals.
    """
    y = math.exp(-4.0 * _intensity(alpha_sq))
    return y / (2.0 * (1.0 + math.sqrt(1.0 - y)))


def improvement_db(p_err: float, p_ref: float) -> float:
    """Improvement of ``p_err`` over ``p_ref`` in decibels: 10 log10(p_ref / p_err)."""
    for name, p in (("p_err", p_err), ("p_ref", p_ref)):
        if not math.isfinite(p) or not 0 < p <= 1:
            raise ValueError(f"{name} must be a probability in (0, 1], got {p!r}")
    return 10.0 * math.log10(p_ref / p_err)
