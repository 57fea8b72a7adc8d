"""Starting point: the two basic operations.

For positive f the multiplicative derivative is f*(t) = e^{f'(t)/f(t)} and
the multiplicative integral over [a,b] is exp(integral of ln f).  Working
with their logs keeps everything additive and overflow-free, so that is
what the library returns; exponentiate at the end if you want the raw
value.
"""

import math

import numpy as np

from mulcalc import (FamilySpec, Interval, combine, make_model,
                     mul_derivative_log, mul_integral_log, star_values)

iv = Interval(0.5, 2.0)

# f(t) = e^{t^2}: ln f = t^2, so ln f* = 2t and the log integral is
# (b^3 - a^3)/3
f = make_model(FamilySpec("exp_power", (2.0,), iv))
print("f = exp(t^2) on", iv)
print("  ln f*(1.0)       =", mul_derivative_log(f, 1.0), "(expect 2.0)")
print("  log integral     =", mul_integral_log(f, iv),
      "(expect (8 - 0.125)/3 =", (2.0**3 - 0.5**3) / 3.0, ")")
print("  f*(1.0) itself   =", math.exp(mul_derivative_log(f, 1.0)))

# a model built from a plain callable has no analytic star; finite
# differences fill in transparently
g = make_model(FamilySpec("exp_recip", (), iv))
ts = np.linspace(0.6, 1.9, 5)
print("\ng = exp(1/t):")
print("  ln g* sampled    =", np.round(star_values(g, ts), 6))
print("  exact -1/t^2     =", np.round(-1.0 / ts**2, 6))

# combinations stay in log space too.  The product rule for these
# derivatives is (fg)* = f* g*, which is addition after taking logs.
fg = combine("product", f, g)
print("\nproduct f*g:")
print("  ln (fg)*(1.2)    =", mul_derivative_log(fg, 1.2))
print("  ln f* + ln g*    =",
      mul_derivative_log(f, 1.2) + mul_derivative_log(g, 1.2))

# and the integral of a p-th power scales linearly in the log
fp = combine("power_fn", f, 3.0)
print("\npower f^3:")
print("  log integral     =", mul_integral_log(fp, iv))
print("  3 * base         =", 3.0 * mul_integral_log(f, iv))
