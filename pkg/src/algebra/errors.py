"""Exception hierarchy shared by the algebra modules."""

from typing import Any, Optional


class FusionKitError(Exception):
    """Base class for all toolkit errors."""


class FusionInputError(FusionKitError, ValueError):
    """Malformed input: bad files, unknown labels, domain violations."""


class NumericError(FusionKitError, RuntimeError):
    """A numerical procedure did not converge."""

    def __init__(self, message: str, iterations: Optional[int] = None):
        super().__init__(message)
        self.iterations = iterations


class ModularityError(FusionKitError):
    """Verlinde data is not integral or S violates a precondition."""

    def __init__(self, message: str, worst: Optional[tuple[int, int, int]] = None):
        super().__init__(message)
        self.worst = worst


class InconsistencyError(FusionKitError):
    """Two computations of the same quantity disagree."""

    def __init__(self, message: str, expected: Any = None, actual: Any = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class ConstructionError(FusionKitError):
    """The crossed-product realization cannot be built for the given input."""


class OutsideAlgebraError(FusionKitError):
    """An element does not lie in the realized crossed-product algebra."""

    def __init__(self, message: str, distance: float):
        super().__init__(message)
        self.distance = distance
