"""Exception hierarchy shared by every module.

The CLI maps each class onto a process exit code.
"""


class FundbenchError(ValueError):
    exit_code = 1


class InputError(FundbenchError):
    """Malformed or out-of-contract input (bad file, bad parameter, broken precondition)."""

    exit_code = 2


class InsufficientDataError(FundbenchError):
    """The dataset lacks inputs a command needs."""

    exit_code = 3


class DegenerateError(FundbenchError):
    """A quantity is mathematically undefined for the given data (zero volatility, exact fit...)."""

    exit_code = 4
