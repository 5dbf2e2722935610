"""Exception hierarchy shared by every module."""


class SchattenError(Exception):
    """Base class for all errors raised by schattenkit."""


class InvalidInput(SchattenError, ValueError):
    """Malformed, non-finite or out-of-range input."""


class DegenerateInput(SchattenError, ValueError):
    """Input is valid but too close to a degenerate case (e.g. the zero matrix)."""


class UnsupportedExponent(SchattenError, ValueError):
    """The requested exponent is one for which the characterization fails (p = 2)."""


class BudgetExceeded(SchattenError):
    """An oracle query budget ran out.

    ``best`` holds the best iterate available at that point and ``diagnostics``
    whatever partial bookkeeping the caller collected.
    """

    def __init__(self, message, best=None, diagnostics=None):
        super().__init__(message)
        self.best = best
        self.diagnostics = diagnostics


class InconsistentOracle(SchattenError):
    """Oracle answers cannot come from any unit-norm matrix."""


class NotAnIsometry(SchattenError):
    """A black-box sphere map violated a property every surjective isometry has."""


class FrameDegenerate(SchattenError):
    """Recovered orthonormal frames failed their orthonormality check."""
