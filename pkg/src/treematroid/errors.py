class TreeMatroidError(Exception):
    """Base class for all library errors."""


class ValidationError(TreeMatroidError, ValueError):
    """An input object violates a structural invariant."""


class BudgetExceeded(TreeMatroidError):
    """An exhaustive enumeration would exceed its configured cap."""

    def __init__(self, what, needed, cap):
        super().__init__(f"{what}: needs {needed} steps, cap is {cap}")
        self.what = what
        self.needed = needed
        self.cap = cap


class HypothesisViolation(TreeMatroidError):
    """The preconditions of a construction do not hold.

    ``witness`` carries the object that blocks the construction
    (a dependent set, an unblocked vector, ...).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FormatError(TreeMatroidError, ValueError):
    """A serialized instance does not match its schema."""

    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column
