"""Exception types shared across the package."""


class SylowkitError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(SylowkitError):
    """An enumeration grew past its configured element budget.

    ``partial`` records how many elements were enumerated before giving up,
    so the failure is reported rather than silently truncated.
    """

    def __init__(self, message: str, partial: int | None = None):
        super().__init__(message)
        self.partial = partial


class Inapplicable(SylowkitError):
    """Parameters fall outside a construction's applicability domain."""


class InvalidConstruction(SylowkitError):
    """A construction-time consistency check failed (bad action, non-central
    quotient kernel, predicate subset not closed, ...)."""


class ExprError(SylowkitError):
    """Expression-language parse failure, with byte offset and the set of
    token kinds that would have been accepted at that point."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.offset = offset
        self.expected = expected

    def diagnostic(self) -> str:
        out = f"parse error at byte {self.offset}: {self.args[0]}"
        if self.expected:
            out += " (expected " + " | ".join(self.expected) + ")"
        return out
