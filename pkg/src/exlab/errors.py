"""Exception hierarchy shared across the library.

Every error category used by the CLI exit-code mapping has a dedicated
class so callers can branch without string matching.
"""


class ExlabError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(ExlabError):
    """Malformed or out-of-contract input."""


class ResourceLimitError(ExlabError):
    """A configured cap (vertices, cliques, SDP dimension, ...) was exceeded."""

    def __init__(self, message, limit=None, requested=None):
        super().__init__(message)
        self.limit = limit
        self.requested = requested


class ValidationFailure(ExlabError):
    """A probability assignment or behavior violates its defining constraints.

    ``violations`` is a list of human-readable records, one per broken
    constraint.
    """

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class SolverFailure(ExlabError):
    """Numerical solver did not converge; diagnostics attached."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ExtractionFailure(ExlabError):
    """A computed certificate failed its mandatory post-verification."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class PreconditionViolation(ExlabError):
    """Operation called outside its stated precondition."""


class InfeasibleBehaviorError(ExlabError):
    """A behavior completion has no solution in [0, 1]."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])
