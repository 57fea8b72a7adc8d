"""The function-algebra rules and the integral properties.

Every combinator carries a closed-form multiplicative derivative; here each
one is checked against a finite difference of the combined ln_f on an
interior grid, for every ordered pair of catalog models.  The integral
properties are checked in logs against the quadrature tolerance.
"""

import math

import numpy as np
import pytest

from mulcalc import (DomainError, FamilySpec, Interval,
                     check_derivative_consistency, combine, make_model,
                     mul_derivative_log, mul_integral_log,
                     oriented_integral_log)

FD_TOL = 1e-6
QUAD_TOL = 1e-9

# Keeping the catalog on a moderate interval matters for the f_pow_g rule:
# with g = e^{t^3} the combined ln_f reaches ~1e2 here, and the rounding
# part of a finite difference (eps * |ln_f| / h) stays well under the 1e-6
# acceptance.  On wider intervals that term alone would swamp it.
BASE = Interval(0.5, 1.5)


def catalog():
    specs = [
        FamilySpec("constant", (3.0,), BASE),
        FamilySpec("exp_affine", (1.2, -0.3), BASE),
        FamilySpec("exp_power", (2.0,), BASE),
        FamilySpec("exp_power", (3.0,), BASE),
        FamilySpec("exp_recip", (), BASE),
        FamilySpec("exp_poly", (0.5, -1.0, 2.0), BASE),
    ]
    return [make_model(s) for s in specs]


MODELS = catalog()
PAIR_OPS = ("product", "quotient", "sum", "f_pow_g")


class TestDerivativeRules:
    @pytest.mark.parametrize("op", PAIR_OPS)
    def test_pair_rules_match_finite_difference(self, op):
        for f in MODELS:
            for g in MODELS:
                combined = combine(op, f, g)
                err = check_derivative_consistency(combined)
                assert err <= FD_TOL, "%s of %s, %s: %g" % (op, f.label, g.label, err)

    @pytest.mark.parametrize("scalar_op,arg", [("scalar_multiple", 2.5), ("power_fn", 1.7)])
    def test_scalar_rules_match_finite_difference(self, scalar_op, arg):
        for f in MODELS:
            combined = combine(scalar_op, f, arg)
            err = check_derivative_consistency(combined)
            assert err <= FD_TOL, "%s of %s: %g" % (scalar_op, f.label, err)

    def test_scalar_multiple_leaves_star_unchanged(self):
        f = make_model(FamilySpec("exp_power", (2.0,), Interval(0.0, 1.0)))
        for c in (0.1, 1.0, 17.0):
            cf = combine("scalar_multiple", f, c)
            for t in (0.0, 0.3, 1.0):
                assert mul_derivative_log(cf, t) == mul_derivative_log(f, t)

    def test_product_adds_exponents(self):
        f = make_model(FamilySpec("exp_affine", (1.0, 0.0), Interval(0.0, 2.0)))
        g = make_model(FamilySpec("exp_power", (2.0,), Interval(0.0, 2.0)))
        fg = combine("product", f, g)
        assert mul_derivative_log(fg, 1.0) == pytest.approx(3.0, abs=1e-12)

    def test_sum_of_identical_models_collapses(self):
        f = make_model(FamilySpec("exp_power", (2.0,), BASE))
        s = combine("sum", f, f)
        ts = np.linspace(BASE.a, BASE.b, 11)
        for t in ts:
            assert mul_derivative_log(s, float(t)) == pytest.approx(
                mul_derivative_log(f, float(t)), abs=1e-12)

    def test_power_fn_scales_star(self):
        f = make_model(FamilySpec("exp_recip", (), BASE))
        h = combine("power_fn", f, 3.0)
        assert mul_derivative_log(h, 1.0) == pytest.approx(-3.0, abs=1e-12)

    def test_scalar_multiple_rejects_nonpositive(self):
        f = MODELS[0]
        with pytest.raises(ValueError):
            combine("scalar_multiple", f, 0.0)
        with pytest.raises(ValueError):
            combine("scalar_multiple", f, -2.0)

    def test_unknown_op_rejected(self):
        with pytest.raises(ValueError):
            combine("convolution", MODELS[0], MODELS[1])

    def test_domain_intersection(self):
        f = make_model(FamilySpec("exp_power", (2.0,), Interval(0.0, 2.0)))
        g = make_model(FamilySpec("exp_recip", (), Interval(1.0, 3.0)))
        fg = combine("product", f, g)
        assert fg.domain == Interval(1.0, 2.0)

    def test_disjoint_domains_rejected(self):
        f = make_model(FamilySpec("exp_power", (2.0,), Interval(0.0, 1.0)))
        g = make_model(FamilySpec("exp_recip", (), Interval(2.0, 3.0)))
        with pytest.raises(DomainError):
            combine("product", f, g)


class TestIntegralProperties:
    """The multiplicative integral in logs: all properties become linear
    statements about the ordinary integral of ln f."""

    def test_power_fn_scales_integral(self):
        for f in MODELS[:4]:
            base = mul_integral_log(f, BASE)
            scaled = mul_integral_log(combine("power_fn", f, 2.5), BASE)
            assert scaled == pytest.approx(2.5 * base, abs=QUAD_TOL)

    def test_product_adds_integrals(self):
        for f, g in zip(MODELS, MODELS[1:]):
            lhs = mul_integral_log(combine("product", f, g), BASE)
            rhs = mul_integral_log(f, BASE) + mul_integral_log(g, BASE)
            assert lhs == pytest.approx(rhs, abs=QUAD_TOL)

    def test_quotient_subtracts_integrals(self):
        for f, g in zip(MODELS, MODELS[1:]):
            lhs = mul_integral_log(combine("quotient", f, g), BASE)
            rhs = mul_integral_log(f, BASE) - mul_integral_log(g, BASE)
            assert lhs == pytest.approx(rhs, abs=QUAD_TOL)

    def test_additivity_over_split(self):
        c = 1.1
        for f in MODELS:
            whole = mul_integral_log(f, BASE)
            parts = (mul_integral_log(f, Interval(BASE.a, c))
                     + mul_integral_log(f, Interval(c, BASE.b)))
            assert parts == pytest.approx(whole, abs=QUAD_TOL)

    def test_orientation_reversal_negates(self):
        for f in MODELS:
            fwd = oriented_integral_log(f, BASE.a, BASE.b)
            assert oriented_integral_log(f, BASE.b, BASE.a) == -fwd

    def test_degenerate_interval_is_zero(self):
        for f in MODELS:
            assert oriented_integral_log(f, 1.3, 1.3) == 0.0


def test_combined_closed_form_mean_survives_scalar_ops():
    f = make_model(FamilySpec("exp_power", (2.0,), Interval(0.0, 1.0)))
    cf = combine("scalar_multiple", f, 2.0)
    assert cf.closed_form_mean_log == pytest.approx(math.log(2.0) + 1.0 / 3.0, abs=1e-12)
    pf = combine("power_fn", f, 3.0)
    assert pf.closed_form_mean_log == pytest.approx(1.0, abs=1e-12)
