"""Exception types shared across the package."""


class QSpectraError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QSpectraError, ValueError):
    """An argument lies outside the mathematical domain of the operation
    (a pole, a branch point, an excluded parameter range)."""


class PoleError(DomainError):
    """The argument is within the exclusion radius of a pole of the
    function being evaluated."""


class NonConvergent(QSpectraError, ArithmeticError):
    """A truncated sum or product hit its term cap before the stopping
    rule was satisfied, or a value left the double-precision range."""


class EmptySpectrum(QSpectraError):
    """The requested index range contains no eigenvalues."""


class WindowTooSmall(QSpectraError, ValueError):
    """A truncation window shorter than two lattice sites was requested."""


class ConvergenceFailure(QSpectraError, ArithmeticError):
    """An iterative solver or an internal consistency check failed to
    reach its target accuracy."""


class QuadratureFailure(QSpectraError, ArithmeticError):
    """Adaptive quadrature exceeded its refinement budget."""
