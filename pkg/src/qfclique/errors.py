"""Exception types; the CLI maps each family to an exit status."""


class QFCliqueError(Exception):
    pass


class PreconditionError(QFCliqueError, ValueError):
    """A mathematical precondition of an operation is violated."""


class DegenerateFormError(PreconditionError):
    """The quadratic form has a nontrivial radical."""


class OracleLimitError(QFCliqueError):
    """The brute-force oracle would exceed its vertex cap or time budget."""


class InconsistencyError(QFCliqueError, AssertionError):
    """Two independent computations disagree; carries a minimal reproducer."""
