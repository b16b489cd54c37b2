"""Exception hierarchy shared by the library and the command line."""


class IdjcmError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(IdjcmError, ValueError):
    """A physical or numerical parameter is outside its allowed range."""


class ConfigurationError(IdjcmError, ValueError):
    """Bad sweep, grid or command-line configuration."""


class NumericalError(IdjcmError, ArithmeticError):
    """A numerical guard tripped (truncation, grid coverage)."""


class TruncationError(NumericalError):
    pass


class GridCoverageError(NumericalError):
    pass
