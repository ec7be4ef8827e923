"""Exception types raised across the package."""


class Ar1CharError(Exception):
    """Base class for all package errors."""


class OutOfRangeError(Ar1CharError, ValueError):
    pass


class InvalidRationalError(Ar1CharError, ValueError):
    pass


class NotInQError(Ar1CharError, ValueError):
    """Raised when (k, l) is not a reduced fraction in (0, 1) with k - l odd."""


class NoConvergenceError(Ar1CharError, ArithmeticError):
    pass


class ZeroGammaLagError(Ar1CharError, ZeroDivisionError):
    pass


class NegativeDiscriminantError(Ar1CharError, ValueError):
    pass


class InsufficientLagsError(Ar1CharError, ValueError):
    pass


class PathTooShortError(Ar1CharError, ValueError):
    pass


class ConditionNotMetError(Ar1CharError, ValueError):
    pass


class InvalidPhiError(Ar1CharError, ValueError):
    pass


class InvalidBError(Ar1CharError, ValueError):
    pass
