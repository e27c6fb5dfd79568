"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError (and subclasses) -> 1,
NonConvergenceError -> 2, OSError -> 3.
"""


class ValidationError(ValueError):
    """Invalid argument, configuration value, or precondition violation."""


class BudgetError(ValidationError):
    """A requested computation exceeds the configured resource budgets."""


class DimensionMismatchError(ValidationError):
    """Operands live in different ambient dimensions."""


class NonConvergenceError(RuntimeError):
    """A quadrature or refinement ladder failed to stabilize.

    Carries the last observed residual in ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
