"""Exception hierarchy shared by the library and the command-line front end."""


class TwoFaceError(Exception):
    """Base class for every error raised by :mod:`twoface`."""


class InstanceError(TwoFaceError, ValueError):
    """An input instance violates the schema or one of the graph invariants."""

    code = "invalid_instance"


class SchemaError(InstanceError):
    code = "schema"


class EmbeddingError(InstanceError):
    """Rotation system is inconsistent, the graph is disconnected, or Euler fails."""

    code = "embedding"


class TerminalPlacementError(InstanceError):
    code = "terminal_placement"


class EvenFaceCountError(InstanceError):
    """A designated face carries an even number of terminals."""

    code = "even_face_count"


class ContextMismatchError(TwoFaceError, ValueError):
    """Polynomials or ring elements from different (modulus, y-period) contexts were mixed."""


class DegreeCapError(TwoFaceError, ArithmeticError):
    """An x-degree exceeded the configured cap; this always indicates a bug upstream."""


class ExtractionError(TwoFaceError, ArithmeticError):
    """A character-sum extraction produced a non-scalar result (degree bound violated)."""


class InvariantViolation(TwoFaceError, AssertionError):
    """An algebraic or combinatorial invariant that the theory guarantees has failed."""


class ProbabilisticFailure(TwoFaceError, RuntimeError):
    """The retry cap was exhausted without a verified answer."""
