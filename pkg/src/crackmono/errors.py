"""Exception types raised by the library."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class NumericalFailureError(ArithmeticError):
    """A numerical kernel failed (ill-conditioned solve, non-finite values, ...).

    ``condition`` carries the condition estimate when the failure comes from
    a linear solve, otherwise it is ``None``.
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition
