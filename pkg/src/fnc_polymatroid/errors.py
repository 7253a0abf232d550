"""
Exception hierarchy for fnc-polymatroid.

Verdicts ("valid or violations") are returned as report objects; these
exceptions signal misuse or preconditions that cannot hold.
"""

from typing import Any, Optional


class FncError(Exception):
    """Base class for all library errors."""


class FieldError(FncError, ValueError):
    """Invalid field modulus or operands over different fields."""


class DimensionError(FncError, ValueError):
    """Matrix or solution shapes do not conform."""


class SingularMatrixError(FncError, ArithmeticError):
    """Raised by invert() when the matrix has rank below its order."""


class BudgetError(FncError):
    """An enumeration would exceed its configured budget."""

    def __init__(self, message: str, required: int, budget: int):
        super().__init__(message)
        self.required = required
        self.budget = budget


class PolymatroidError(FncError, ValueError):
    """Bad ground-set index, oversize ground set or undefined quantity."""


class NetworkError(FncError, ValueError):
    """Unknown node or edge, or a cyclic network where a DAG is required."""


class MapError(FncError, ValueError):
    """Edge-to-ground-set map that is not total or points outside the ground set."""


class DpnViolationError(FncError):
    """The network is not discrete polymatroidal where the operation requires it."""

    def __init__(self, message: str, report: Any):
        super().__init__(message)
        self.report = report


class ExtractionError(FncError):
    """The representation is inconsistent with the network map."""


class ConstructionError(FncError, ValueError):
    """Ineligible basis vector or invalid demand choice."""


class UnverifiedSolutionError(FncError):
    """An operation that needs a verified solution received one that fails verification."""

    def __init__(self, message: str, report: Any):
        super().__init__(message)
        self.report = report


class InputFormatError(FncError):
    """A file could not be parsed or failed schema validation."""

    def __init__(self, source: str, location: Optional[str], message: str):
        where = f"{source}: {location}" if location else source
        super().__init__(f"{where}: {message}")
        self.source = source
        self.location = location
        self.message = message
