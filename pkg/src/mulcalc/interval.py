"""Closed real intervals used as integration / validity domains."""

import dataclasses
import math


@dataclasses.dataclass(frozen=True)
class Interval:
    """A closed interval [a, b] with a < b, both finite.

    Degenerate and reversed intervals are rejected at construction so the
    rest of the library can assume positive length.  Code that needs the
    oriented conventions (zero-width, swapped endpoints) goes through
    `core.oriented_integral_log` instead of building an Interval.
    """

    a: float
    b: float

    def __post_init__(self):
        a = float(self.a)
        b = float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("interval endpoints must be finite, got [%r, %r]" % (self.a, self.b))
        if not a < b:
            raise ValueError("interval requires a < b, got [%r, %r]" % (a, b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self):
        return self.b - self.a

    @property
    def midpoint(self):
        return 0.5 * (self.a + self.b)

    def contains(self, t, tol=0.0):
        """Whether the point t lies in [a - tol, b + tol]."""
        return self.a - tol <= t <= self.b + tol

    def contains_interval(self, other, tol=1e-12):
        """Whether `other` sits inside this interval, up to a small slack."""
        return self.a - tol <= other.a and other.b <= self.b + tol
