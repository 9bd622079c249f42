"""Exception types shared across the package."""


class TwoTasepError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TwoTasepError, ValueError):
    """Input lies outside its admissible domain (density simplex, z-domain, ...)."""


class SingularDenominatorError(TwoTasepError, ZeroDivisionError):
    """The common rational denominator of the z -> rho map vanished."""


class DegenerateDerivativeError(TwoTasepError, ZeroDivisionError):
    """A partial derivative needed for a characteristic velocity vanished."""


class InvalidShockPairError(TwoTasepError, ValueError):
    """Two states handed to a shock-speed computation do not lie on a shock line."""


class BracketError(TwoTasepError, ValueError):
    """Root bracket does not enclose a sign change."""


class SpeedOrderingError(TwoTasepError, RuntimeError):
    """A constructed wave sequence violates weak speed monotonicity."""


class InfeasibleCurrentError(TwoTasepError, ValueError):
    """Boundary-current inversion produced a point far outside the density simplex."""


class NonConvergenceError(TwoTasepError, RuntimeError):
    """Steady-state iteration exhausted its budget.

    Carries the best iterate found so far in ``best`` and its residual in
    ``residual``.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class PhaseClassificationError(TwoTasepError, RuntimeError):
    """Velocity signs produced a forbidden phase pair (ordering bug)."""


class ConfigError(TwoTasepError, ValueError):
    """Invalid run configuration."""
