"""Exception hierarchy shared by every module."""


class DRError(Exception):
    """Base class for all errors raised by drlinrel."""


class MalformedMatrix(DRError, ValueError):
    """Input is not a finite, well-shaped real matrix."""


class SingularMatrix(DRError, ArithmeticError):
    pass


class NotSymmetric(DRError, ValueError):
    pass


class DimensionMismatch(DRError, ValueError):
    pass


class DimensionTooSmall(DRError, ValueError):
    pass


class NotFirmlyNonexpansive(DRError, ValueError):
    """A matrix offered as a resolvent violates ||2J - I|| <= 1."""


class NotMaximallyMonotone(DRError, ValueError):
    pass


class NotSingleValued(DRError, ValueError):
    """The relation is not the graph of an everywhere defined linear map."""


class PreconditionViolated(DRError, ValueError):
    pass


class NotInD(PreconditionViolated):
    """The pair's reflected resolvents do not commute (within tolerance)."""


class InternalInconsistency(DRError, RuntimeError):
    """Two independent computations of the same quantity disagree."""
