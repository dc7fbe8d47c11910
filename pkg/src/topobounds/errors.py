"""Exception hierarchy shared by every module.

The CLI maps :class:`InvalidInput` subclasses to exit code 2 and
:class:`BudgetExceeded` subclasses to exit code 3.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class InvalidInput(ToolkitError, ValueError):
    """Input object violates the operation's precondition."""


class InvalidParameter(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class UnsupportedSearchField(InvalidInput):
    pass


class InsufficientRank(InvalidInput):
    pass


class ParseError(InvalidInput):
    pass


class NotMonotone(ParseError):
    pass


class WrongArity(ParseError):
    pass


class BudgetExceeded(ToolkitError):
    """A search or enumeration exceeded its configured cap or deadline."""


class InstanceTooLarge(BudgetExceeded):
    pass


class PosetTooLarge(BudgetExceeded):
    pass


class Timeout(BudgetExceeded):
    pass


class InternalError(ToolkitError, AssertionError):
    """A mathematical guarantee failed; indicates a bug."""
