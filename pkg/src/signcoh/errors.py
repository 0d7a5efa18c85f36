class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class HorizonExceeded(RuntimeError):
    """An iteration that must terminate did not do so within its horizon.

    The partial trace is kept on the exception so the failure can be
    reproduced and inspected.
    """

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


class FalsificationError(AssertionError):
    """A computed trace contradicts a closed-form claim it is checked against."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
