"""Exception hierarchy shared by all modules."""


class OrderDensityError(Exception):
    """Base class for every error raised by this package."""


class PreconditionViolated(OrderDensityError, ValueError):
    pass


class NotCoprime(PreconditionViolated):
    pass


class TooLarge(OrderDensityError, ValueError):
    pass


class NotPrime(PreconditionViolated):
    pass


class ReducibleModulus(PreconditionViolated):
    pass


class FieldMismatch(OrderDensityError, TypeError):
    pass


class ZeroElement(PreconditionViolated, ZeroDivisionError):
    """Raised for the zero element where a unit is required (also covers division by zero)."""


DivisionByZero = ZeroElement


class ConstantInput(PreconditionViolated):
    pass


class ZeroInput(PreconditionViolated):
    pass


class ParseError(OrderDensityError, ValueError):
    pass


class ConstantA(PreconditionViolated):
    """`a` is a constant; use the constant-case dispatcher instead of a profile."""


class CharacteristicDividesD(PreconditionViolated):
    pass


class DLessThanTwo(PreconditionViolated):
    pass


class PDividesN(PreconditionViolated):
    pass


class FDoesNotDivideN(PreconditionViolated):
    pass


class FTooSmall(PreconditionViolated):
    pass


class AssumptionNotVerified(OrderDensityError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BudgetExceeded(OrderDensityError):
    pass


class BadReduction(PreconditionViolated):
    pass
