"""Exception hierarchy shared by all modules."""


class NonresidueError(Exception):
    pass


class InvalidArgument(NonresidueError, ValueError):
    pass


class PreconditionViolation(NonresidueError, ValueError):
    pass


class TooFewDivisors(PreconditionViolation):
    def __init__(self, n: int, tau: int, threshold: int):
        super().__init__(f"{n} has {tau} divisors, need at least {threshold}")
        self.n = n
        self.tau = tau
        self.threshold = threshold


class InternalError(NonresidueError, RuntimeError):
    """An invariant that the mathematics guarantees was found broken."""
