"""Exception types shared across the package."""


class TwistG2Error(Exception):
    """Base class for package errors."""


class ConfigError(TwistG2Error):
    """Invalid or inconsistent experiment configuration."""


class FormatError(TwistG2Error):
    """Malformed time-tag file.

    Carries ``offset`` (byte position, or -1 when not applicable) so that
    callers can report where parsing failed.
    """

    def __init__(self, message, offset=-1):
        super().__init__(f"{message} (byte offset {offset})" if offset >= 0 else message)
        self.offset = offset


class CapacityError(TwistG2Error):
    """A requested simulation would generate an unreasonable number of events."""


class InsufficientDataError(TwistG2Error):
    """An estimator cannot be evaluated because required counts are zero."""
