"""Maximum a posteriori decisions and the resulting error probability.

With equal priors the receiver assigns +alpha to an outcome whenever its likelihood under +alpha
is at least that under -alpha (ties go to +alpha). The error of that rule is

    P_err = 1 - 1/2 sum_s max(P(s|+), P(s|-)) = 1/2 sum_s min(P(s|+), P(s|-)),

which is the smallest error of any deterministic decision function on the same outcomes.
Outcomes may be photon numbers or score-bin indices; the rule does not care which.
"""

from .map_rule import (
    decision_table,
    error_probability,
    expected_error_ideal_counter,
    ideal_counter_distribution,
    map_decide,
)

__all__ = [
    "map_decide",
    "decision_table",
    "error_probability",
    "ideal_counter_distribution",
    "expected_error_ideal_counter",
]
