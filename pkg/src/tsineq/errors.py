"""Exception hierarchy shared by every module of the package."""


class TsineqError(Exception):
    """Base class for all package errors."""


class TimeScaleError(TsineqError, ValueError):
    pass


class EmptyScale(TimeScaleError):
    pass


class BadSegment(TimeScaleError):
    pass


class NotInScale(TimeScaleError):
    pass


class EmptyRange(TimeScaleError):
    pass


class NotContinuousScale(TimeScaleError):
    pass


class NotIntegerScale(TimeScaleError):
    pass


class ExprError(TsineqError, ValueError):
    pass


class ExprSyntaxError(ExprError):
    """Malformed expression text; ``offset`` is the byte offset of the fault."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    pass


class DomainError(ExprError, ArithmeticError):
    pass


class OutOfRange(TsineqError, ValueError):
    pass


class DegeneratePoint(TsineqError, ValueError):
    pass


class DepthExceeded(TsineqError, ValueError):
    pass


class NonPositiveWeight(TsineqError, ValueError):
    pass


class OutOfWindow(TsineqError, ValueError):
    pass


class ShiftNotInScale(TsineqError, ValueError):
    """A corollary's shift points are not members of the time scale."""


class ScenarioError(TsineqError):
    pass


class ParseError(ScenarioError, ValueError):
    pass


class ValidationError(ScenarioError, ValueError):
    """Scenario violates an invariant; ``field`` names the offending entry."""

    def __init__(self, field, message=""):
        super().__init__(f"{field}: {message}" if message else field)
        self.field = field
