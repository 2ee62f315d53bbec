"""Monte Carlo harness: end-to-end discrimination runs, sweeps and analytic curves.

Each run draws the branch with probability 1/2, samples the absorbed photon number (dark events
included), turns it into an outcome through the configured detector, and decides by MAP on
conditionals fixed before evaluation. Error tallies are integers merged in chunk order, so a
fixed seed gives identical results for any worker count.

SQL and Helstrom references are evaluated at the efficiency-rescaled intensity alpha_sq / eta;
the simulation itself runs at alpha_sq.
"""

from ..io import emit_results
from .curves import analytic_error, curve_slope, expected_curve, sql_crossover
from .detectors import Detector, IdealCounter, TraceDetector, get_detector
from .runner import counting_stderr, run_experiment
from .sweeps import sweep_alpha, sweep_beta

__all__ = [
    "run_experiment",
    "sweep_beta",
    "sweep_alpha",
    "emit_results",
    "expected_curve",
    "analytic_error",
    "sql_crossover",
    "curve_slope",
    "counting_stderr",
    "Detector",
    "IdealCounter",
    "TraceDetector",
    "get_detector",
]
