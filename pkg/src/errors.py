"""Exceptions raised by the toolkit.

Everything derives from ValueError so callers catching ValueError keep working.
"""


class GKZError(ValueError):
    """Base class for all toolkit errors"""


class CurveError(GKZError):
    """Invalid curve generators"""


class NotStrictlyIncreasingError(CurveError):
    pass


class GcdNotOneError(CurveError):
    pass


class EmptyGeneratorsError(CurveError):
    pass


class BoundExceededError(GKZError):
    """A search cap was hit before completeness could be certified"""


class SupportMismatchError(GKZError):
    pass


class NotInKernelError(GKZError):
    pass


class ExponentInIError(GKZError):
    pass


class ZeroPowerError(GKZError):
    pass


class NotBinomialCurveError(GKZError):
    pass


class SameRootError(GKZError):
    pass


class NumericError(GKZError):
    """Failures of the floating-point engine"""


class SingularPointError(NumericError):
    pass


class NearSingularError(NumericError):
    pass


class RootFindingError(NumericError):
    pass


class DivisionByZeroCoordinateError(NumericError):
    pass


class QuadratureError(NumericError):
    pass


class OutsideRegionWarning(UserWarning):
    """Point lies outside the heuristic convergence region of the root series"""
