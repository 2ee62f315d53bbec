"""Closed-form reference limits every simulated receiver is compared against.

* ``sql_error``: ideal homodyne detection, (1 - erf(sqrt(2)|alpha|)) / 2.
* ``helstrom_error``: the quantum optimum for two pure coherent states.
* ``improvement_db``: 10 log10(P_ref / P_err), positive when the receiver beats the reference.

Both limits equal exactly 0.5 at |alpha|^2 = 0 and decrease strictly with intensity; the Helstrom
bound never exceeds the SQL. Priors are equal and the signal set is binary.
"""

from .limits import helstrom_error, improvement_db, sql_error

__all__ = ["sql_error", "helstrom_error", "improvement_db"]
