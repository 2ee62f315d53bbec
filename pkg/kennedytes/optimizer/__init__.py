"""Displacement optimisation: the beta minimising the expected ideal-counter error.

The objective is piecewise smooth, with kinks wherever the MAP boundary moves to another photon
number, so the search is a coarse grid followed by golden-section refinement of every bracketed
local minimum rather than a gradient method. The valley around the nulling displacement, where
N- vanishes, can be narrower than a grid cell and is always refined as well. Flat objectives
(alpha = 0) resolve to the smallest beta on the grid. Results are deterministic for identical
inputs.
"""

from .displacement import (
    DEFAULT_TOL,
    GRID_POINTS,
    golden_section,
    local_minima,
    nulling_displacement,
    optimal_displacement,
)

__all__ = [
    "optimal_displacement",
    "golden_section",
    "local_minima",
    "nulling_displacement",
    "DEFAULT_TOL",
    "GRID_POINTS",
]
