"""Exception types raised by the micg modules.

Errors are grouped by how the command line reports them: configuration and
argument problems are ``InputError``, numerical failures (poles, brackets)
are ``NumericError``.
"""


class MicgError(Exception):
    """Base class for all micg errors."""


class InputError(MicgError, ValueError):
    """Invalid argument or configuration value."""


class NumericError(MicgError, ArithmeticError):
    """A numerical evaluation could not be carried out."""


class PoleProximity(NumericError):
    pass


class InvalidInterleaving(InputError):
    pass


class DuplicateResonance(InputError):
    pass


class NonpositiveDistance(InputError):
    pass


class DegenerateGeometry(InputError):
    pass


class WrongBasis(InputError):
    pass


class LossyAtZeroFrequency(InputError):
    pass


class ZeroTransmitImpedance(NumericError):
    pass


class ZeroTransmitResistance(InputError):
    pass


class NoLocalMinimum(NumericError):
    pass


class CrossingNotBracketed(NumericError):
    pass


class TooManyUsers(InputError):
    pass


class TargetOutOfRange(InputError):
    pass


class ParseError(InputError):
    """Scenario file is not well-formed JSON."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(InputError):
    """Scenario content violates a schema constraint."""

    def __init__(self, message, key_path=""):
        super().__init__(message)
        self.key_path = key_path


class OverlapWarning(UserWarning):
    """Adjacent users' 3 dB bands overlap."""
