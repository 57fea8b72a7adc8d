"""Instantiating the abstract bounds at concrete functions turns them
into statements about classical means of two numbers."""

import math

from mulcalc import (MeanPair, arithmetic, harmonic, logarithmic,
                     p_logarithmic, prop41_check, prop42_check)

mp = MeanPair(1.0, 2.0)
print("means of (1, 2):")
print("  arithmetic   A =", arithmetic(mp))
print("  harmonic     H =", harmonic(mp))
print("  logarithmic  L =", logarithmic(mp))
print("  2-log mean  L2 =", p_logarithmic(mp, 2.0), "= sqrt(7/3) =",
      math.sqrt(7.0 / 3.0))

# A^p - L_p^p bounded by p (b-a) (a^{p-1} + b^{p-1}) / 8.  At
# (1, 2, p=2) the left side is 2.25 - 7/3 = -1/12, the right side 3/4.
rep = prop41_check(mp, 2.0)
print("\npower-mean gap check, p=2:")
print("  lhs =", rep.lhs_log, " rhs =", rep.rhs_log, " holds =", rep.holds)

# the reciprocal-mean statement has two variants.  The first one, as
# stated, compares 1/H - 1/L (always >= 0 since H <= L) against a
# negative right side, so it fails for every pair:
paper = prop42_check(mp, "paper")
print("\nreciprocal-mean check, stated variant:")
print("  lhs = 1/H - 1/L =", paper.lhs_log)
print("  rhs =", paper.rhs_log, "-> holds =", paper.holds)

# the corrected variant takes the uniform bound on |ln f*| = 1/t^2 at
# the left endpoint, i.e. (b-a)/(4 a^2), and does hold:
fixed = prop42_check(mp, "corrected")
print("corrected variant:")
print("  rhs =", fixed.rhs_log, "-> holds =", fixed.holds)
