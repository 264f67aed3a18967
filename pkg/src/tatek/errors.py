"""Exception hierarchy shared by every module."""


class TatekError(Exception):
    """Base class for all errors raised by tatek."""


class InvalidInput(TatekError, ValueError):
    """Input violates an operation's precondition."""


class InsufficientPrecision(TatekError, ArithmeticError):
    """The answer is not determined at the working precision."""


class NotInvertible(TatekError, ArithmeticError):
    """Element or matrix has no inverse in the relevant ring."""


class WindowOverflow(TatekError, ArithmeticError):
    """A Laurent product left the fixed exponent window."""


class FactorizationFailure(TatekError):
    """Pivoting found no unit; no elementary word was produced."""
