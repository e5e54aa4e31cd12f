"""Error types raised by the toolkit.

Every error carries the process exit code the command line reports for it:
2 for bad input, 3 for an exhausted budget. Check failures are not errors;
they come back as Report verdicts.
"""


class SegalKitError(Exception):
    """Base class for toolkit errors."""

    exit_code = 2


class DomainMismatch(SegalKitError, ValueError):
    """Composition or construction across incompatible domains."""


class IndexOutOfRange(SegalKitError, IndexError):
    """A face, degeneracy or spine index outside its valid range."""


class InvalidStructure(SegalKitError, ValueError):
    """A category, simplicial set or space violates its defining identities.

    Args:
        message: Human readable description.
        location: Optional dict naming the offending degree, cell or arrows.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = dict(location or {})


class DocumentError(SegalKitError, ValueError):
    """Malformed or schema-invalid JSON document."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class BudgetExceeded(SegalKitError, RuntimeError):
    """An exhaustive search ran past its configured budget."""

    exit_code = 3

    def __init__(self, what, budget):
        super().__init__(f"{what} exceeded budget of {budget}")
        self.what = what
        self.budget = budget


class NonTerminating(BudgetExceeded):
    """A colimit closure kept producing new arrows; it may be infinite."""

    def __init__(self, what, budget):
        super().__init__(what, budget)
        self.args = (f"{what} did not close within {budget} steps (the colimit may be infinite)",)


class IllFormedQuotient(SegalKitError, RuntimeError):
    """Induced structure maps on a quotient conflict."""


class NotSegal(SegalKitError, ValueError):
    """An operation that needs the Segal condition got an input without it."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IllDefinedComposition(SegalKitError, ValueError):
    """The composition induced on components is not single valued."""


class OracleUnavailable(SegalKitError, ValueError):
    """The requested decision mode does not apply to the given levels."""
