"""Exception types raised by gptasym."""


class GptAsymError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(GptAsymError, ValueError):
    """Bad user input: node counts, shape parameters, orders, separations."""


class SingularPointError(GptAsymError, ValueError):
    """A kernel was evaluated at its singularity."""


class DomainError(GptAsymError, ValueError):
    """A point lies outside the region where a formula is valid."""


class InvertibilityError(GptAsymError, ValueError):
    """The resolvent parameter is outside the invertibility range |lambda| >= 1/2."""


class IncompatibleDataError(GptAsymError, ValueError):
    """Right-hand side or boundary data violates a mean-zero compatibility condition."""


class NearSingularError(GptAsymError, ValueError):
    """Target too close to a curve for the plain trapezoid rule."""


class DegenerateContrastError(GptAsymError, ValueError):
    """Conductivity equal to the background (k == 1)."""


class NearSingularWarning(UserWarning):
    pass


class DiscardedMeanWarning(UserWarning):
    """Raised when a right-hand side was projected to mean zero at |lambda| = 1/2."""
