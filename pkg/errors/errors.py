"""
Exception hierarchy shared by every package.

Configuration problems (bad arguments, shapes, schemas) map to exit code 2,
numerical failures (no convergence, degenerate data) map to exit code 3.
"""

from typing import Any, Optional


class PsvmAbcError(Exception):
    exit_code = 1


class ConfigurationError(PsvmAbcError, ValueError):
    exit_code = 2


class DimensionError(ConfigurationError):
    pass


class ArgumentError(ConfigurationError):
    pass


class SchemaError(ConfigurationError):
    pass


class NumericalError(PsvmAbcError, ArithmeticError):
    exit_code = 3


class ConvergenceError(NumericalError):
    def __init__(self, message: str, best: Optional[Any] = None):
        super().__init__(message)
        self.best = best  # best iterate reached before giving up


class DegenerateResponseError(NumericalError):
    pass


class DegenerateDataError(NumericalError):
    pass


class FitError(NumericalError):
    pass


class InferenceError(NumericalError):
    pass


class GridError(NumericalError):
    pass


class RootError(NumericalError):
    pass
