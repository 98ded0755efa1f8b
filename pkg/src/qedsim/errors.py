"""Exception types shared across the simulator."""


class QedSimError(Exception):
    """Base class for all library errors."""


class LengthMismatch(QedSimError):
    """A configuration's length disagrees with the state's mode count."""


class EmptyState(QedSimError):
    """Every amplitude fell below the prune threshold."""


class NotUnitary(QedSimError):
    """Matrix failed the U†U = I check."""


class NotIsometry(QedSimError):
    """Matrix failed the V†V = I check."""


class BadDimension(QedSimError):
    """Qubit count outside the supported range for dense generation."""


class BisectionFailure(QedSimError):
    """The trace-deficit objective could not be bracketed or was non-monotone."""


class DimensionGuard(QedSimError):
    """Mode count too large for the dense qutrit representation."""


class CreationCollision(QedSimError):
    """A creation target mode was already occupied at application time."""


class CreationOnVacuum(QedSimError):
    """A creation source mode was unoccupied at application time."""


class StaticValidation(QedSimError):
    """Circuit failed pre-run validation (bounds, freshness, shapes)."""


class ParseError(QedSimError):
    """A DSL diagnostic with a 1-based source position.

    kind is one of "syntax", "validation", "unknown-gate".
    """

    def __init__(self, kind: str, line: int, col: int, message: str):
        self.kind = kind
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"{kind} error at {line}:{col}: {message}")
