"""Exception hierarchy shared by the library and the command line."""


class InputError(ValueError):
    """Invalid arguments: bad sizes, out-of-range parameters, mismatched shapes."""


class DataError(InputError):
    """Malformed input data (unparseable files, ragged rows, non-finite values)."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver runs out of budget.

    ``worst_residual`` carries the largest residual norm among the wanted
    pairs at the time the solver gave up.
    """

    def __init__(self, message, worst_residual=float("nan")):
        super().__init__(message)
        self.worst_residual = worst_residual
