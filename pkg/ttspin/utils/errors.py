from typing import Optional


class TTSpinError(Exception):
    """
    Base class for every error raised by the library.

    Attributes:
        status_code (int): HTTP status code used by the API layer.
        exit_code (int): Process exit code used by the command-line front end.
    """

    status_code: int = 400
    exit_code: int = 1

    def __init__(self, detail: str) -> None:
        """Store the human readable detail message."""
        super().__init__(detail)
        self.detail = detail


class DataError(TTSpinError):
    """Input data could not be parsed or does not cover the requested query."""

    status_code = 422
    exit_code = 3


class NumericError(TTSpinError):
    """A numerical precondition or algorithm failed."""

    status_code = 422
    exit_code = 4


class ParseError(DataError):
    """Malformed grid file, reported with its line (and column when known)."""

    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        """Attach the position of the offending token to the message."""
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{detail}{where}")


class UnsupportedFormat(DataError):
    """Grid file declares a format other than lhagrid1."""


class FlavorUnavailable(DataError):
    """Requested parton flavor is not tabulated."""


class OutOfRange(DataError):
    """Query point lies outside the tabulated range."""


class NonPhysicalState(NumericError):
    """Density matrix has an eigenvalue below the physicality tolerance."""


class PhysicalityViolation(NumericError):
    """Correlation diagonal cannot belong to a physical unpolarized state."""


class BelowThreshold(NumericError):
    """Invariant mass below the pair production threshold."""


class AboveEnergy(NumericError):
    """Invariant mass above the collider energy."""


class KinematicSingularity(NumericError):
    """Kinematic point where the cross-section diverges."""


class CollinearDegeneracy(NumericError):
    """Helicity frame is undefined for collinear directions."""


class DegenerateNormalization(NumericError):
    """R-matrix normalization is not positive."""


class NoRootInBracket(NumericError):
    """No sign change was found for a critical boundary."""


class QuadratureFailure(NumericError):
    """Adaptive quadrature did not reach the requested tolerance."""


class EmptyWindow(NumericError):
    """Integrated cross-section in the mass window vanishes."""


class NoSignature(NumericError):
    """Even the smallest threshold window shows no signature."""


class NegativeDensity(NumericError):
    """Decay angular density is negative, so the state is not physical."""


class InsufficientSample(NumericError):
    """Too few events for moment estimation."""


class DomainError(NumericError):
    """Argument outside the mathematical domain of a function."""
