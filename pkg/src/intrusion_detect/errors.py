"""Exception hierarchy shared by all modules."""


class DetectionError(ValueError):
    """Base class for every error raised by this package."""


class DuplicateInput(DetectionError):
    """Two input values compare equal, so the concomitant order is not unique."""

    def __init__(self, x: float):
        super().__init__(f"duplicate input value x={x!r}")
        self.x = x


class TooShort(DetectionError):
    pass


class NoVariation(DetectionError):
    """All concomitant differences vanish (flat or dead channel)."""


class DomainViolation(DetectionError):
    pass


class DegenerateTransfer(DetectionError):
    pass


class BadParameters(DetectionError):
    pass


class InsufficientData(DetectionError):
    pass


class EndpointInfoRequired(DetectionError):
    """The B-trend is ambiguous and h(a) vs h(b) must be known to decide."""
