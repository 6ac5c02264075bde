"""Exception types shared across the package."""


class MinkError(Exception):
    """Base class for all errors raised by :mod:`mink`."""

    code = "error"

    def __init__(self, message, invariant=None):
        super().__init__(message)
        self.invariant = invariant

    def reason(self):
        """One-line machine-parsable reason, used by the CLI."""
        parts = [self.code]
        if self.invariant:
            parts.append(self.invariant)
        parts.append(str(self))
        return ": ".join(parts)


class InvariantError(MinkError, ValueError):
    """An input violates a structural invariant (named in ``invariant``)."""

    code = "invariant"


class NumericalError(MinkError, ArithmeticError):
    """The LP engine hit a pivot or residual it cannot trust."""

    code = "numerical"


class CapExceededError(MinkError):
    """A configured enumeration cap would be exceeded."""

    code = "cap"


class BoundViolation(MinkError, AssertionError):
    """An empirical check contradicted a proven inequality."""

    code = "bound"

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance
