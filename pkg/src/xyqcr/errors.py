"""Exception types raised by the simulator."""


class XYQCRError(Exception):
    """Base class for all package errors."""


class DegenerateBlock(XYQCRError):
    """Even-parity block has a vanishing gap; no unique Bogoliubov rotation."""


class NegativeTemperature(XYQCRError):
    pass


class InvalidState(XYQCRError):
    """A reduced two-site state failed positivity (a convention bug, not physics)."""


class NotPositive(InvalidState):
    pass


class NumericalAbort(XYQCRError):
    """NaN/Inf or a positivity violation escaped the quadrature."""


class FlatResponse(XYQCRError):
    """The time scan found no response above the noise floor."""

    def __init__(self, message, value=0.0):
        super().__init__(message)
        self.value = value


class ZeroDenominator(XYQCRError):
    pass


class TooLarge(XYQCRError):
    pass


class ConfigError(XYQCRError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
