"""Exception hierarchy shared by all modules."""


class PolyAutoError(Exception):
    """Base class for every error raised by this package."""


class InputError(PolyAutoError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class DivisionByZero(InputError, ZeroDivisionError):
    pass


class FieldMismatch(InputError):
    pass


class ZeroInput(InputError):
    pass


class RingMismatch(InputError):
    pass


class ArityMismatch(InputError):
    pass


class ParseError(InputError):
    pass


class NoWordFactorization(InputError):
    """Raised when an operation needs a map built from elementary factors."""


class NotLocallyNilpotent(InputError):
    pass


class NotUnipotentWithinBound(InputError):
    pass


class RootOfUnityScalar(InputError):
    pass


class RangeTooSmall(InputError):
    pass


class NotSemisimple(InputError):
    pass


class PowerMismatch(InputError):
    pass


class NoRootInField(InputError):
    pass


class InvalidFormParameters(InputError):
    pass


class BudgetExceeded(PolyAutoError):
    """A term, pair or iteration budget ran out (CLI exit code 3)."""


class InvariantViolation(PolyAutoError):
    """An internal consistency check failed (CLI exit code 4)."""


class SingularSystem(InvariantViolation):
    pass


class FinitePartNotOrder(InvariantViolation):
    """The finite part of a decomposition does not have the expected order."""
