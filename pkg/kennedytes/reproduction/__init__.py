"""Reproduction scorecard: the headline numbers of the analytic receiver model, checked.

Turns "the model reproduces the measured receiver" into checkable numbers: the optimal
displacement at the reference operating point, the dB improvement over the SQL at its best
intensity, where dark counts push the error back above the SQL, and how flat the dark-count
plateau is. ``kennedytes check`` prints the report and fails when a threshold is breached.
"""

from .report import THRESHOLDS, check_thresholds, compute_report, format_report

__all__ = ["compute_report", "check_thresholds", "format_report", "THRESHOLDS"]
