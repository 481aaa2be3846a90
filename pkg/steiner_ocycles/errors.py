"""
Exception hierarchy for steiner-ocycles.

Every error raised on purpose by the package derives from OcycleError. Most of
them are also ValueErrors, since they report bad input (an inadmissible order, a
malformed listing, a block list that is not a Steiner triple system).
Validators never raise: they return reports, and the raising wrappers attach
that report to the exception.
"""

from typing import Optional

from .reports import ValidationReport


class OcycleError(Exception):
    """Base class for all steiner-ocycles errors."""


class DesignError(OcycleError, ValueError):
    """A block list was rejected as a triple system."""

    def __init__(self, message: str, report: Optional[ValidationReport] = None):
        super().__init__(message)
        self.report = report


class InadmissibleOrderError(OcycleError, ValueError):
    """An order fails v ≡ 1, 3 (mod 6) or a route's minimum."""


class CycleError(OcycleError, ValueError):
    """Bad overlap cycle input, or a builder step that failed its check."""

    def __init__(
        self,
        message: str,
        step: Optional[str] = None,
        report: Optional[ValidationReport] = None,
    ):
        if step:
            message = f"[{step}] {message}"
        super().__init__(message)
        self.step = step
        self.report = report


class ListingParseError(OcycleError, ValueError):
    """A base-case listing token could not be read."""


class FormatError(OcycleError, ValueError):
    """A text artefact does not follow its normative format."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigurationError(OcycleError):
    """Environment or settings value could not be used."""
