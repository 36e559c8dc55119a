"""
errors.py
🚨 Error categories shared by the library and the CLI
"""
from typing import Dict, Type


class CheAttError(Exception):
    """Base class cho tất cả errors của service"""

    category = "error"


class ShapeError(CheAttError, ValueError):
    """Operand dimensions do not line up"""

    category = "shape"


class ContractError(CheAttError, ValueError):
    """A documented precondition was violated (e.g. non-symmetric input)"""

    category = "contract"


class ParameterError(CheAttError, ValueError):
    """A scalar parameter is outside its admissible range"""

    category = "parameter"


class DataError(CheAttError, ValueError):
    """Input data is unreadable, ragged, empty or out of range"""

    category = "data"

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(CheAttError, ValueError):
    """Configuration is invalid or inconsistent"""

    category = "config"


class UndefinedMetricError(CheAttError, ValueError):
    """A metric is undefined for the given inputs (single class, zero variance, ...)"""

    category = "undefined-metric"


class ConvergenceError(CheAttError, RuntimeError):
    """An iterative method exhausted its iteration budget"""

    category = "convergence"


class NonFiniteError(CheAttError, RuntimeError):
    """An operation produced NaN or Inf from finite inputs"""

    category = "non-finite"


# Exit code cho CLI, ổn định giữa các phiên bản
EXIT_CODES: Dict[Type[CheAttError], int] = {
    ShapeError: 10,
    ContractError: 11,
    ParameterError: 12,
    DataError: 13,
    ConfigError: 14,
    UndefinedMetricError: 15,
    ConvergenceError: 16,
    NonFiniteError: 17,
}


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit code (1 for uncategorized failures)"""
    for error_type, code in EXIT_CODES.items():
        if isinstance(error, error_type):
            return code
    return 1
