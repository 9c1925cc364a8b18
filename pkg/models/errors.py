"""Exception and warning types shared by every package."""

from typing import Optional


class UnrestRiskError(Exception):
    """Base class for all errors raised by this project."""


class DataError(UnrestRiskError, ValueError):
    """
    Invalid input data.

    File readers fill in ``row`` (1-based data row, header excluded) and
    ``column`` so the message can point at the offending cell.
    """

    def __init__(self, message: str, row: Optional[int] = None,
                 column: Optional[str] = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class ConfigError(DataError):
    """Invalid or incomplete configuration file."""


class NumericalError(UnrestRiskError, ArithmeticError):
    """Non-finite intermediate values or singular matrices."""


class ConvergenceError(NumericalError):
    """Optimizer failed after every restart. ``report`` holds the diagnostics."""

    def __init__(self, message: str, report: Optional[dict] = None):
        self.report = report or {}
        super().__init__(message)


class SeparationError(NumericalError):
    """Perfect separation in a binary-choice model."""


class EstimationWarning(UserWarning):
    """Estimation finished but something deserves a look."""


class DroppedEventsWarning(UserWarning):
    """Events were left out of a study because their windows hit missing data."""


class DataWarning(UserWarning):
    """Input was accepted but is probably not what the user meant."""
