"""Exception types shared across the package.

Everything derives from ValueError so generic callers can catch broadly,
while tests and the CLI can distinguish failure modes.
"""


class HydrocastError(ValueError):
    """Base class for all package errors."""


class ParseError(HydrocastError):
    """Malformed input file (carries a row number where possible)."""


class DomainError(HydrocastError):
    """A value violates a domain invariant (negative discharge, log of zero, ...)."""


class GapError(HydrocastError):
    """A calendar date inside the requested span has no observations."""


class SizeError(HydrocastError):
    """Input too short, or mismatched lengths between aligned inputs."""


class SeriesRangeError(HydrocastError):
    """Requested slice bounds fall outside the series span."""


class EstimationError(HydrocastError):
    """The estimator could not produce admissible parameters."""


class NumericError(EstimationError):
    """Degenerate or non-finite arithmetic inside an estimator or simulator."""


class ConfigError(HydrocastError):
    """Inconsistent or incomplete configuration."""
