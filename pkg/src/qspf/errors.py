"""Exception types shared across the package."""


class QspfError(Exception):
    """Base class for all qspf errors."""


class DomainError(QspfError):
    """Input outside the mathematical domain (|x| > 1, inf_norm not in (0,1), ...)."""


class UnsupportedParity(QspfError):
    """Phase vector length implies an odd polynomial degree; only even is supported."""


class AliasError(QspfError):
    """Grid too small to hold the coefficient window without wrap-around."""


class NormViolation(QspfError):
    """Target sup-norm exceeds 1 - eta, or 1 - |b|^2 underflows the eta floor."""


class GridExhausted(QspfError):
    """Weiss doubling hit max_grid before the convergence criteria were met."""


class NotImaginary(QspfError):
    """Coefficient vector expected to be purely imaginary is not."""


class SingularSystem(QspfError):
    """Dense linear system in the reference solver is numerically singular."""


class BreakdownError(QspfError):
    """Schur recursion produced a non-finite or vanishing pivot."""


class SolverError(QspfError):
    """Base for iterative-solver failures; carries the partial report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DivergenceError(SolverError):
    """Fixed-point residual exceeded 10x its initial value for 5 straight iterations."""


class MaxIterReached(SolverError):
    """Fixed-point iteration hit max_iter before reaching tol."""
