"""The exact integral identities behind the error bounds.

Each identity states that a deviation (midpoint or endpoint average vs the
integral mean, in logs) equals a weighted integral of ln f*.  Both sides
are computed independently, so the residual is a direct measure of the
numerics; on these models it sits at rounding level.
"""

import numpy as np

from mulcalc import (FamilySpec, Interval, make_model, midpoint_identity,
                     parts_identity, substitution_identity,
                     trapezoid_identity)

unit = Interval(0.0, 1.0)
f = make_model(FamilySpec("exp_power", (2.0,), unit))

# hand computation for ln f = t^2 on [0,1]: mean = 1/3, midpoint value
# 1/4, endpoint average 1/2.  So the midpoint gap is -1/12 and the
# trapezoid gap is 1/6.
rep = midpoint_identity(f, unit)
print("midpoint identity on exp(t^2), [0,1]")
print("  lhs  =", rep.lhs_log, " (expect -1/12 =", -1.0 / 12.0, ")")
print("  rhs  =", rep.rhs_log)
print("  residual =", rep.residual)

rep = trapezoid_identity(f, unit)
print("trapezoid identity")
print("  lhs  =", rep.lhs_log, " (expect 1/6)")
print("  rhs  =", rep.rhs_log)
print("  residual =", rep.residual)

# integration by parts in the log domain, g(t) = t against f = e^t:
# integral of t * 1 dt = 1/2 on both sides
e = make_model(FamilySpec("exp_affine", (1.0, 0.0), unit))
rep = parts_identity(e, lambda t: t, lambda t: np.ones_like(t), unit)
print("parts with g(t)=t on exp(t):")
print("  lhs =", rep.lhs_log, " rhs =", rep.rhs_log, " residual =", rep.residual)

# substitution with an endpoint-fixing map h(u) = u^2.  With
# g(t) = t - 1/2 both sides are exactly 3/10.
rep = substitution_identity(f, lambda u: u**2, lambda u: 2.0 * u,
                            lambda t: t - 0.5, lambda t: np.ones_like(t),
                            unit)
print("substitution with h(u)=u^2, g(t)=t-1/2:")
print("  lhs =", rep.lhs_log, " rhs =", rep.rhs_log, " (expect 0.3)")
print("  residual =", rep.residual)
