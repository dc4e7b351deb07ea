"""Exception hierarchy shared by every module.

Input errors (malformed data) and resource errors (a search or completion
bound was hit) are kept apart from mathematical failures, which are never
raised but reported as values.
"""


class NctError(Exception):
    """Base class for all package errors."""


class InputError(NctError, ValueError):
    """Malformed input: unknown cell ids, wrong arity, bad JSON, ..."""


class DimensionError(InputError):
    """A construction was asked for a dimension beyond the ambient bound."""


class ResourceError(NctError):
    """A configured enumeration or completion bound was exceeded."""

    def __init__(self, message, bound=None, trace=None):
        super().__init__(message)
        self.bound = bound
        self.trace = trace


class BudgetExceeded(ResourceError):
    pass


class CompletionBoundExceeded(ResourceError):
    pass


class IndeterminacyError(NctError):
    """The window is too small to determine a reconstruction."""


class InternalError(NctError, AssertionError):
    """A construction produced an object that fails validation."""
