"""Exception taxonomy shared by every module.

All library errors derive from KurasyncError so callers can catch one type.
The CLI maps any KurasyncError to exit status 2.
"""


class KurasyncError(Exception):
    """Base class for all errors raised by this package."""


class InputError(KurasyncError, ValueError):
    """Malformed input: bad edge list, invalid vertex set, unparseable file."""


class GenerationError(KurasyncError, RuntimeError):
    """A random graph sampler exhausted its restart budget."""


class NumericalError(KurasyncError, RuntimeError):
    """An iterative numerical routine failed to certify its own accuracy.

    Carries the best residual seen in ``residual`` when available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DomainError(KurasyncError, ValueError):
    """A parameter lies outside the mathematical validity of a formula."""


class BracketError(KurasyncError, ValueError):
    """A bisection was asked to run on a bracket that does not bracket."""


class ScheduleError(KurasyncError, ValueError):
    """An amplification schedule step is illegal at the point it is applied."""


class ConsistencyError(KurasyncError, RuntimeError):
    """Two independent routes to the same quantity disagree beyond tolerance."""
