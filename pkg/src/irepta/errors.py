"""Exception hierarchy shared across the package."""


class IreptaError(Exception):
    """Base class for all package errors."""


class ConfigError(IreptaError, ValueError):
    """Inconsistent or invalid configuration / model input."""


class DataError(IreptaError, ValueError):
    """Malformed input data (CSV files, histories)."""


class NumericalFailure(IreptaError, RuntimeError):
    """The LP backend could not make progress (stalling, singular basis)."""


class DegenerateScale(IreptaError, ArithmeticError):
    """Charnes-Cooper scale variable ``u`` too close to zero to recover a point."""


class InfeasibleError(IreptaError):
    """An optimization problem has no feasible point."""


class NoConvergence(IreptaError, RuntimeError):
    """An iterative method exhausted its iteration budget."""


class DecodeError(IreptaError, ValueError):
    """A solution vector does not match the model's variable index map."""


class LimitReached(IreptaError):
    """A node or time limit stopped the search before optimality was proven."""
