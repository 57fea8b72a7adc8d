"""Inequality checks and the strict/robust split.

The right-hand sides of the bound statements contain ln f* terms.  When
ln f* >= 0 on the interval the stated (strict) form is sound.  When ln f*
goes negative the strict right side can go negative while the left side
is an absolute value, and the bound fails; replacing each term by
|ln f*| (robust mode) restores it.  exp(1/t) is the stock example: its
ln f* = -1/t^2 is negative everywhere.
"""

import warnings

from mulcalc import (FamilySpec, HypothesisWarning, Interval, MBound,
                     hh_check, make_model, midpoint_bound, midpoint_bound_M,
                     trapezoid_bound)


def show(rep):
    print("  %-12s mode=%-7s lhs=% .6f rhs=% .6f margin=% .6f holds=%s"
          % (rep.name, rep.mode, rep.lhs_log, rep.rhs_log, rep.margin, rep.holds))


unit = Interval(0.0, 1.0)
f = make_model(FamilySpec("exp_power", (2.0,), unit))

print("exp(t^2) on [0,1], ln f* = 2t >= 0, everything holds:")
left, right = hh_check(f, unit)
show(left)
show(right)
show(midpoint_bound(f, unit))
show(trapezoid_bound(f, unit))

iv = Interval(1.0, 2.0)
g = make_model(FamilySpec("exp_recip", (), iv))
print("\nexp(1/t) on [1,2], ln f* = -1/t^2 < 0:")
with warnings.catch_warnings():
    # the hypothesis advisory fires here by design; silence it for display
    warnings.simplefilter("ignore", HypothesisWarning)
    show(midpoint_bound(g, iv))                    # strict: fails
    show(midpoint_bound(g, iv, mode="robust"))     # robust: holds
    show(trapezoid_bound(g, iv))
    show(trapezoid_bound(g, iv, mode="robust"))

    # uniform-bound form.  In robust mode the tightest valid M has
    # ln M = sup |ln f*| = 1 (at t=1), giving rhs = 1/4.
    print("\nuniform-bound variant with explicit ln M = 1:")
    show(midpoint_bound_M(g, iv, m=MBound(1.0), mode="robust"))

# an undersized M is refused rather than silently reported
try:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        midpoint_bound_M(g, iv, m=MBound(0.5), mode="robust")
except Exception as exc:
    print("\nundersized M rejected:", exc)
