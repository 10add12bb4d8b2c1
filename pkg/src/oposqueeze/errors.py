"""Exception hierarchy shared by the model, estimation and I/O layers."""


class OPOError(Exception):
    """Base class for every error raised by this package."""


class DomainError(OPOError, ValueError):
    """An argument lies outside the region where the model is defined."""


class AboveThresholdError(DomainError):
    """Pump power at or above the oscillation threshold."""


class InvalidLossError(DomainError):
    """Intra-cavity loss would reach or exceed 1 - T."""


class InconsistentInputsError(DomainError):
    """Observed values cannot be produced by the claimed parameters."""


class UnphysicalMeasurementError(DomainError):
    """A measured variance sits at or below the electronic noise floor."""


class ParseError(OPOError, ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyTraceError(ParseError):
    """A trace file with a header but no samples."""
