"""Exception hierarchy shared by every module."""


class LssaError(Exception):
    """Base class for all toolkit errors."""


class DomainError(LssaError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ExtrapolationError(DomainError):
    """A tabulated quantity was queried outside its abscissa range."""


class UsageError(LssaError, ValueError):
    """Inputs are structurally invalid (too few samples, empty lists, bad grids)."""


class SingularFitError(LssaError):
    """The least-squares design matrix is rank deficient."""


class CalibrationError(LssaError):
    """A calibration produced a non-physical value."""


class ConvergenceError(LssaError):
    """An iterative solver failed to converge."""


class DataError(LssaError):
    """A data file is malformed.

    ``line`` is the 1-based line number in the file (header is line 1), or
    ``None`` when the problem concerns the file as a whole.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f"{':' if where else 'line '}{line}"
        super().__init__(f"{where}: {message}" if where else message)
