"""Exception hierarchy shared by every module."""


class SymplIndexError(Exception):
    """Base class for all library errors."""


class NonFiniteEntry(SymplIndexError, ValueError):
    pass


class DimensionMismatch(SymplIndexError, ValueError):
    pass


class DegenerateInput(SymplIndexError, ValueError):
    pass


class NotSymplectic(SymplIndexError, ValueError):
    pass


class NotLagrangian(SymplIndexError, ValueError):
    pass


class NotTransverse(SymplIndexError, ValueError):
    pass


class ChartGapError(SymplIndexError, RuntimeError):
    """Consecutive path samples admit no common auxiliary Lagrangian.

    The path is too coarsely sampled near a crossing; refine it.
    """


class PathSynthesisError(SymplIndexError, RuntimeError):
    pass


class EigenvalueOne(SymplIndexError, ValueError):
    pass


class PsiNotInSp0(SymplIndexError, ValueError):
    pass


class PhiNotInSpPsi(SymplIndexError, ValueError):
    pass


class DegenerateEndpoint(SymplIndexError, ValueError):
    pass


class SearchExhausted(SymplIndexError, RuntimeError):
    pass


class StepTooLarge(SymplIndexError, ValueError):
    pass


class SingularK(SymplIndexError, ValueError):
    pass


class NotFree(SymplIndexError, ValueError):
    pass


class NotInSp0(SymplIndexError, ValueError):
    pass


class NonIntegerResult(SymplIndexError, ArithmeticError):
    pass


class CalibrationAmbiguous(SymplIndexError, RuntimeError):
    pass


class AsymmetryError(SymplIndexError, ArithmeticError):
    """A product that should be symmetric is not, beyond tolerance."""


class SchemaViolation(SymplIndexError, ValueError):
    """An input document does not match its schema.

    ``pointer`` is the JSON pointer of the offending field.
    """

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.message = message
