"""Exception hierarchy shared by every module."""


class ModalError(Exception):
    """Base class for all errors raised by modalqc."""


class ZeroNorm(ModalError, ValueError):
    pass


class NonFinite(ModalError, ValueError):
    pass


class TooSmall(ModalError, ValueError):
    pass


class IndexOutOfRange(ModalError, IndexError):
    pass


class GridTooSmall(ModalError, ValueError):
    pass


class DimensionMismatch(ModalError, ValueError):
    pass


class NotUnitary(ModalError, ValueError):
    pass


class NotNormalized(ModalError, ValueError):
    pass


class BadOccupation(ModalError, ValueError):
    pass


class NotPowerOfTwo(ModalError, ValueError):
    pass


class BitOutOfRange(ModalError, IndexError):
    pass


class EmptyBits(ModalError, ValueError):
    pass


class ConfigError(ModalError):
    """Problem with an experiment configuration."""


class ParseError(ConfigError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ConfigError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
