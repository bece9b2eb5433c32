"""Exception hierarchy shared by every module in the package."""


class XiContourError(Exception):
    """Base class for all package errors."""


class PoleError(XiContourError, ZeroDivisionError):
    """Evaluation requested at (or numerically on top of) a pole."""


class DomainError(XiContourError, ValueError):
    """Argument outside the region where an operation is defined."""


class OrderingError(XiContourError, ValueError):
    """Contour radii violate the required ordering chain."""


class ConvergenceError(XiContourError, ArithmeticError):
    """Adaptive quadrature hit its depth limit above tolerance."""

    def __init__(self, message, value=None, err_estimate=None):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate


class AuditFailure(XiContourError):
    """No candidate convention reproduces the direct evaluation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class FitError(XiContourError):
    """A log-log fit is too poor to support a slope estimate.

    The rejected fit is kept on ``fit`` so callers can still report it.
    """

    def __init__(self, message, fit=None):
        super().__init__(message)
        self.fit = fit


class RealnessViolation(XiContourError):
    """The completed zeta function left the real axis on the critical line."""
