"""
Tropical Corals - Error hierarchy

Every failure the library can report derives from CoralError. The exit code
attached to each class is what the command line returns for it:

- 2: input could not be parsed
- 3: input parsed but is not a valid object
- 4: a constraint or parameter choice is infeasible
- 5: an output file could not be written
"""

from typing import Any, Optional


class CoralError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1

    def __init__(self, message: str = "", details: Optional[Any] = None):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.details = details

    def to_report(self) -> dict:
        """Machine-readable error body shared by the CLI and the API."""
        report = {"error": self.__class__.__name__, "message": self.message}
        if self.details is not None:
            report["details"] = self.details
        return report


class SolverInconsistency(CoralError):
    """Internal rank assertion failed; the constraint was not actually general."""


# ============================================================================
# Parse errors
# ============================================================================

class ParseError(CoralError):
    exit_code = 2


# ============================================================================
# Validation errors
# ============================================================================

class ValidationFailed(CoralError):
    exit_code = 3


class ZeroVector(ValidationFailed):
    pass


class NotPrimitive(ValidationFailed):
    pass


class InvalidGraph(ValidationFailed):
    pass


class InvalidCoral(ValidationFailed):
    pass


class InvalidTMT(ValidationFailed):
    pass


class NotGoodType(ValidationFailed):
    pass


class NotTrivalent(ValidationFailed):
    pass


class NonGeneralType(ValidationFailed):
    pass


class NonGeneralCoral(ValidationFailed):
    pass


class DirectionMismatch(ValidationFailed):
    pass


class BadIndex(ValidationFailed):
    pass


class BadScale(ValidationFailed):
    pass


class InvalidDegree(ValidationFailed):
    pass


class EmptyDegree(InvalidDegree):
    pass


class NotGoodPosition(ValidationFailed):
    pass


# ============================================================================
# Infeasibility errors
# ============================================================================

class Infeasible(CoralError):
    exit_code = 4


class BadConstraint(Infeasible):
    pass


class HeightsInfeasible(Infeasible):
    pass


class SamplingFailed(Infeasible):
    pass


# ============================================================================
# Output errors
# ============================================================================

class OutputUnwritable(CoralError):
    exit_code = 5
