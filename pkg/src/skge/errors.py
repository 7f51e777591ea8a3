"""Exception hierarchy shared by all modules."""


class SKGEError(Exception):
    """Base class for every error raised by the package."""


class DomainError(SKGEError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class RangeError(SKGEError, OverflowError):
    """Result would overflow double precision."""


class SingularityError(DomainError):
    """Evaluation at a singular point of a kernel."""


class SeriesDivergenceError(DomainError):
    """Series representation does not converge at the requested point."""


class EllipticityError(DomainError):
    """Coefficients violate uniform ellipticity (|rho| must be < 1)."""


class ShapeError(SKGEError, ValueError):
    """Two fields that must share a grid do not."""


class StabilityError(SKGEError):
    """Finite-difference scheme would lose diagonal dominance."""


class SolverError(SKGEError):
    """A linear or iterative solver failed to converge."""


class AccuracyError(SKGEError):
    """Requested tolerance was not reached.

    The best available estimate and its error bound travel with the exception
    so callers can decide whether a degraded answer is usable.
    """

    def __init__(self, message, estimate=float("nan"), achieved_error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.achieved_error = achieved_error
