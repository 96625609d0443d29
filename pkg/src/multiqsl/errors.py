"""Exception hierarchy. ``exit_code`` is the CLI's category code."""


class QslError(Exception):
    exit_code = 1


class NumericInputError(QslError, ValueError):
    exit_code = 3


class CapacityError(QslError, ValueError):
    exit_code = 3


class DensityMatrixError(QslError, ValueError):
    exit_code = 3


class DomainError(QslError, ValueError):
    """Time or parameter outside the model's domain."""

    exit_code = 3


class SingularityError(QslError, ArithmeticError):
    """Rate form of the generator diverges where the coherence vanishes."""

    exit_code = 4


class AccuracyError(QslError, ArithmeticError):
    """Quadrature failed to reach the requested accuracy."""

    exit_code = 4


class AmbiguityError(QslError, ValueError):
    exit_code = 3


class UnsupportedFamilyError(QslError, ValueError):
    exit_code = 3


class DegenerateEvolutionError(QslError, ArithmeticError):
    """Frozen dynamics: both the Bures angle and all norm rates vanish."""

    exit_code = 4


class RangeError(DomainError):
    """Query outside the support of a tabulated model."""
