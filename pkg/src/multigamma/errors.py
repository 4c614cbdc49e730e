"""Exception hierarchy shared by every evaluator.

Domain problems (bad inputs, poles, conditioning) derive from
:class:`DomainError`; numerical breakdowns (series or quadrature that
would not converge) derive from :class:`ConvergenceError`.
"""


class MultigammaError(Exception):
    pass


class DomainError(MultigammaError, ValueError):
    """The requested point lies outside the region where the routine is valid."""


class DivergentInput(DomainError):
    pass


class IllConditioned(DomainError):
    """A nome sits too close to the unit circle for double precision."""


class PoleProximity(DomainError):
    """The argument is within the guard distance of a zero or pole."""


class RatioOnRealAxis(DomainError):
    pass


class DomainViolation(DomainError):
    pass


class InadmissibleSample(DomainError):
    """Raised by identity checks when a sample fails the preconditions."""


class TruncationCapacity(DomainError):
    pass


class ConvergenceError(MultigammaError, ArithmeticError):
    pass


class MaxTermsExceeded(ConvergenceError):
    pass


class QuadratureFailure(ConvergenceError):
    pass


class PoleOnContour(QuadratureFailure):
    pass


class SlowConvergenceWarning(RuntimeWarning):
    pass
