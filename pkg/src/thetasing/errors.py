"""Exception types shared across the package."""


class ThetaSingError(Exception):
    pass


class InvalidPeriodMatrix(ThetaSingError, ValueError):
    """Raised when a matrix is not symmetric or its imaginary part is not positive definite."""


class PrecisionUnreachable(ThetaSingError):
    """The requested truncation tolerance needs a lattice radius above ``max_radius``."""


class NotOnTheta(ThetaSingError, ValueError):
    pass


class NoConvergence(ThetaSingError):
    pass


class LeftSiegelSpace(ThetaSingError):
    """A Newton step left the Siegel upper half space."""


class OddDimension(ThetaSingError, ValueError):
    pass


class DimensionMismatch(ThetaSingError, ValueError):
    pass


class UnsupportedKernelDimension(ThetaSingError, ValueError):
    pass


class UnsupportedPower(ThetaSingError, ValueError):
    pass


class DegreeOverflow(ThetaSingError, ValueError):
    pass


class CertificateFailure(ThetaSingError):
    """An exact class identity did not hold; ``residual`` carries what was left over."""

    def __init__(self, message, residual=None, trace=None):
        super().__init__(message)
        self.residual = residual
        self.trace = list(trace or [])


class SingularSystem(ThetaSingError, ArithmeticError):
    pass


class NonEffectiveShape(UserWarning):
    """A class ``a*lambda_1 - b*D`` with ``b <= 0``; its slope is not meaningful."""
