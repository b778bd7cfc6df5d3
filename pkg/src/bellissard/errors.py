"""Exception hierarchy shared by all modules."""


class BellissardError(Exception):
    """Base class for every error raised by this package."""


class UsageError(BellissardError, ValueError):
    """Bad arguments: mixed backends, out-of-range parameters, unsorted input."""


class ParseError(UsageError):
    """A decimal string could not be parsed."""


class RegimeError(UsageError):
    """Coupling outside the proven regime lambda > 2 without an explicit opt-in."""


class CapError(UsageError):
    """Exact-mode length request above the configured cap."""


class BudgetError(UsageError):
    """A scan grid is too large for the configured work budget."""


class RangeError(BellissardError, IndexError):
    """A requested index lies beyond the computed sequence."""


class DomainError(BellissardError, ValueError):
    """A value lies outside the domain of an operation (negative R_j under sqrt, ...)."""


class DegenerateRecursionError(DomainError, ZeroDivisionError):
    """The recursion had to divide by zero (or by an interval containing zero)."""

    def __init__(self, index: int):
        super().__init__(f"degenerate recursion: R_{index} is zero or encloses zero")
        self.index = index
