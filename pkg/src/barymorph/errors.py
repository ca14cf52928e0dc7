"""Exception hierarchy shared by the library and the CLI."""


class MorphError(Exception):
    """Base class for all barymorph errors."""

    exit_code = 1


class StructuralError(MorphError, ValueError):
    """Malformed combinatorial data (bad permutation, mismatched dart sets)."""

    exit_code = 2


class DegenerateInputError(MorphError, ValueError):
    """Zero-length edges, empty vertex stars, singular systems."""

    exit_code = 6


class DomainError(MorphError, ValueError):
    """Input outside an operation's domain (non-convex, not 3-connected, ...)."""

    exit_code = 6


class UnrealizableError(MorphError):
    """The toroidal system ``L P = H`` has no solution for the given weights."""

    exit_code = 3

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class NotIsotopicError(MorphError):
    """No integer re-coordinatization makes two translation fields agree."""

    exit_code = 4

    def __init__(self, message, dart=None):
        super().__init__(message)
        self.dart = dart


class ConditionViolated(MorphError):
    """The scalar edge-tweak condition ``delta*alpha_tail == eps*alpha_head`` fails."""

    exit_code = 6


class ValidationFailure(MorphError):
    """A validator found crossings or non-convex faces."""

    exit_code = 5

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
