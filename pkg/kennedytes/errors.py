"""Exception types raised across the receiver simulation.

Plain ``ValueError`` still covers invalid values (pydantic's ``ValidationError`` is one); these
subclasses exist so the CLI can map failures to exit codes and callers can catch the narrow case.
"""

from __future__ import annotations


class ConfigError(ValueError):
    """An experiment configuration is internally inconsistent or names unknown keys."""


class NumericalError(RuntimeError):
    """A computation produced a non-finite value where a probability was expected."""


class UnknownOutcomeError(KeyError):
    """An outcome label lies outside the support a conditional distribution was built on."""

    def __init__(self, outcome):
        super().__init__(outcome)
        self.outcome = outcome

    def __str__(self) -> str:
        return f"outcome {self.outcome!r} is outside the trained support"
