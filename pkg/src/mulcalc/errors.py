"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """A point or interval falls outside a function model's domain, or a
    construction would produce a model with an empty / invalid domain."""


class NumericalFailure(ArithmeticError):
    """A numerical routine could not produce a trustworthy answer.

    Carries the best available estimate and its error estimate so callers
    can report partial results instead of nothing.
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class ConsistencyError(ArithmeticError):
    """Two independent ways of computing the same quantity disagree by more
    than the tolerance they were supposed to agree to."""


class MBoundViolation(ValueError):
    """A claimed uniform bound on the log of the multiplicative derivative
    fails at some sampled point of the interval."""


class HypothesisWarning(UserWarning):
    """A check ran on inputs that do not satisfy the assumptions the
    underlying inequality needs; the result is reported but means little."""
