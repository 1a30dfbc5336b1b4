"""Exception types shared across the package."""


class SpinCarnotError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SpinCarnotError, ValueError):
    """An input lies outside the physically meaningful domain."""


class NonEngineError(DomainError):
    """Cold effective temperature is not below the hot one; no engine regime."""


class DegenerateCycleError(DomainError):
    """Equal gap endpoints: the cycle encloses no area (zero entropy change)."""


class InvalidStateError(SpinCarnotError, ValueError):
    """A (population, population-rate) pair is unreachable by the dynamics."""


class InfeasibleDurationError(SpinCarnotError, ValueError):
    """Requested duration is shorter than the branch can achieve."""


class NumericalError(SpinCarnotError, RuntimeError):
    """Quadrature, root finding, or optimization failed to converge.

    Carries a ``diagnostics`` dict with whatever the failing routine knew.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
