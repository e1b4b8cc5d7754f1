"""Exception types raised by the evaluators."""


class ThetaSumError(Exception):
    """Base class for all package errors."""


class DomainError(ThetaSumError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class InfeasibleCancellation(ThetaSumError):
    """Direct summation would lose too many digits to cancellation.

    Attributes
    ----------
    peak_log_term : float
        Predicted natural log of the largest term magnitude.
    budget : float
        The log-magnitude budget that was exceeded.
    """

    def __init__(self, peak_log_term, budget, message=None):
        self.peak_log_term = float(peak_log_term)
        self.budget = float(budget)
        if message is None:
            message = (
                f"peak log term {self.peak_log_term:.4g} exceeds budget "
                f"{self.budget:.4g}; use the dual or contour route"
            )
        super().__init__(message)


class NoValidAngle(ThetaSumError):
    """No rotation angle keeps the point clear of the spiral cuts."""


class MarginTooSmall(ThetaSumError):
    """The point sits (numerically) on the spiral of integration."""


class NonConvergence(ThetaSumError):
    """Adaptive quadrature ran out of panels before meeting its tolerance."""


class EmptyZ1(ThetaSumError):
    """The dual point has no divergent lattice indices."""
