"""Compute the reproduction metrics and check them against thresholds."""

from __future__ import annotations

import math
from typing import Dict, List, Tuple

import numpy as np

from ..experiment import analytic_error, curve_slope, expected_curve, sql_crossover
from ..models import ReceiverParams
from ..optimizer import optimal_displacement

# Operating points.
REFERENCE_ALPHA_SQ = 1.5
BEST_IMPROVEMENT_ALPHA_SQ = 4.8
LARGE_ALPHA_SQ = 25.0
PLATEAU_RANGE = (9.0, 12.0)
SLOPE_RANGE = (3.0, 4.0)
MONOTONE_GRID = np.linspace(0.1, 6.0, 30)

# Measured receiver, and the visibility the analytic comparison curve is drawn with.
MEASURED = ReceiverParams(transmissivity=0.982, visibility=0.998, efficiency=0.98)
CURVE = ReceiverParams(transmissivity=0.982, visibility=0.9985, efficiency=0.98)
CURVE_WITH_DARK = CURVE.model_copy(update={"dark_high_rate": 3e-8})
PERFECT = ReceiverParams(transmissivity=1.0, visibility=1.0, efficiency=1.0)

THRESHOLDS = {
    "beta_opt_sq_min": 1.36,  # +-10% around |beta|^2 = 1.51
    "beta_opt_sq_max": 1.66,
    "large_signal_ratio_min": 0.95,  # beta_opt -> alpha for bright signals
    "large_signal_ratio_max": 1.05,
    "improvement_db_min": 6.2,  # 7.7 dB +- 1.5 dB
    "improvement_db_max": 9.2,
    "sql_crossover_min": 6.5,
    "sql_crossover_max": 8.5,
    "plateau_slope_ratio_max": 0.1,
    "monotone_violations_max": 0,
}


def compute_report() -> Dict:
    """Evaluate every metric on the analytic ideal-counter model."""
    reference = optimal_displacement(math.sqrt(REFERENCE_ALPHA_SQ), MEASURED)
    large = optimal_displacement(math.sqrt(LARGE_ALPHA_SQ), PERFECT)
    (best,) = expected_curve([BEST_IMPROVEMENT_ALPHA_SQ], CURVE)
    errors = [analytic_error(float(x), CURVE).p_err_min for x in MONOTONE_GRID]
    plateau = curve_slope(CURVE_WITH_DARK, *PLATEAU_RANGE)
    slope = curve_slope(CURVE_WITH_DARK, *SLOPE_RANGE)

    return {
        "beta_opt_sq": round(reference.beta_sq, 4),
        "p_err_reference": float(f"{reference.p_err_min:.4g}"),
        "large_signal_ratio": round(large.beta_opt / math.sqrt(LARGE_ALPHA_SQ), 4),
        "improvement_db": round(best.improvement_db, 3),
        "improvement_db_low": round(best.improvement_db_low, 3),
        "improvement_db_high": round(best.improvement_db_high, 3),
        "sql_crossover": round(sql_crossover(CURVE_WITH_DARK), 3),
        "plateau_slope_ratio": float(f"{abs(plateau) / abs(slope):.4g}"),
        "monotone_violations": int(np.count_nonzero(np.diff(errors) >= 0)),
    }


def check_thresholds(report: Dict) -> Tuple[bool, List[str]]:
    """Return (passed, failures). Each failure names the metric and the breach."""
    failures = []
    checks = [
        ("beta_opt_sq", ">=", THRESHOLDS["beta_opt_sq_min"]),
        ("beta_opt_sq", "<=", THRESHOLDS["beta_opt_sq_max"]),
        ("large_signal_ratio", ">=", THRESHOLDS["large_signal_ratio_min"]),
        ("large_signal_ratio", "<=", THRESHOLDS["large_signal_ratio_max"]),
        ("improvement_db", ">=", THRESHOLDS["improvement_db_min"]),
        ("improvement_db", "<=", THRESHOLDS["improvement_db_max"]),
        ("sql_crossover", ">=", THRESHOLDS["sql_crossover_min"]),
        ("sql_crossover", "<=", THRESHOLDS["sql_crossover_max"]),
        ("plateau_slope_ratio", "<=", THRESHOLDS["plateau_slope_ratio_max"]),
        ("monotone_violations", "<=", THRESHOLDS["monotone_violations_max"]),
    ]
    for metric, op, limit in checks:
        value = report[metric]
        ok = value <= limit if op == "<=" else value >= limit
        if not ok:
            failures.append(f"{metric} = {value} (want {op} {limit})")
    return len(failures) == 0, failures


def format_report(report: Dict) -> str:
    """Render the scorecard as aligned text."""
    passed, failures = check_thresholds(report)
    lines = ["Receiver model reproduction report", "=" * 34]
    for k, v in report.items():
        lines.append(f"  {k:24} {v}")
    lines.append("-" * 34)
    lines.append("  RESULT: " + ("PASS" if passed else "FAIL"))
    for f in failures:
        lines.append(f"    - {f}")
    return "\n".join(lines)
