"""Exceptions raised by spinpath.

Every error derives from :class:`SpinpathError` and from the builtin a caller
would naturally catch for the same problem, so ``except ValueError`` keeps
working around field coercion.
"""


class SpinpathError(Exception):
    """Base class for all spinpath errors."""


class ValidationError(SpinpathError, ValueError):
    """A record field could not be coerced or failed a constraint.

    The offending field name is available as ``field``.
    """
    def __init__(self, field, message):
        self.field = field
        self.message = message
        super(ValidationError, self).__init__(
            '{0}: {1}'.format(field, message) if field else message)


class DomainError(SpinpathError, ValueError):
    """An argument lies outside the domain of an operation."""


class FitError(SpinpathError, ValueError):
    """A least squares fit is under-determined."""


class NormalizationError(SpinpathError, ZeroDivisionError):
    """A reference interferogram has no contrast to normalise by."""


class EstimationError(SpinpathError, ZeroDivisionError):
    """A count quadruple holds no counts."""
