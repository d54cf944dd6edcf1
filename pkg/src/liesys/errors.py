"""Exception hierarchy.

Every error carries the ``module.operation`` that raised it so that the CLI
can name the origin of a failure in its diagnostic.
"""


class LiesysError(Exception):
    def __init__(self, message, operation=None):
        super().__init__(message)
        self.operation = operation

    def __str__(self):
        msg = super().__str__()
        if self.operation:
            return f"[{self.operation}] {msg}"
        return msg


class DomainError(LiesysError, ValueError):
    """Argument outside the domain of an operation (e.g. a Pinney x <= 0)."""


class ConfigurationError(LiesysError, ValueError):
    pass


class SingularConfigurationError(LiesysError, ValueError):
    """Degenerate base data: coincident or dependent particular solutions."""


class RealnessError(LiesysError, ValueError):
    """A square root in a superposition rule would have a negative argument."""


class BranchError(LiesysError, ValueError):
    pass


class InversionError(LiesysError, ValueError):
    pass


class PoleError(LiesysError, ValueError):
    def __init__(self, message, operation=None, t_cross=None):
        super().__init__(message, operation)
        self.t_cross = t_cross


class NumericConsistencyError(LiesysError, ArithmeticError):
    pass


class VerificationWindowError(LiesysError, ValueError):
    pass
