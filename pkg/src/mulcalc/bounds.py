"""Inequality checkers, all reporting additive log-domain margins.

Two evaluation modes exist because the right-hand sides involve ln f*,
which the underlying proofs implicitly treat as nonnegative:

* strict - right-hand sides use ln f* exactly as stated.  Provably sound
  when ln f* >= 0 on the interval; elsewhere it can (and does) fail, which
  is precisely what the falsification scan looks for.
* robust - every ln f* term is replaced by |ln f*|.  Reported for
  comparison, asserted nowhere: no proof covers it.

The left-hand sides carry an absolute value in every statement, so lhs_log
is always |log of the stated product|, identical in both modes.
"""

import dataclasses
import math
import warnings

import numpy as np

from .core import mean_log, star_values
from .errors import HypothesisWarning, MBoundViolation
from .functions import is_mul_convex_sampled, star_model
from .quadrature import QuadratureConfig

MODES = ("strict", "robust")

# holds means margin >= -HOLDS_SLACK; the slack absorbs representation
# noise at exact-equality cases (constant models) without masking real
# violations, which show up orders of magnitude larger.
HOLDS_SLACK = 1e-12

_HYPOTHESIS_PAIRS = 128
_GRID_N = 257


@dataclasses.dataclass(frozen=True)
class BoundReport:
    name: str
    mode: str
    lhs_log: float
    rhs_log: float
    margin: float
    holds: bool

    def to_dict(self):
        return {"name": self.name, "mode": self.mode, "lhs_log": self.lhs_log,
                "rhs_log": self.rhs_log, "margin": self.margin, "holds": self.holds}


@dataclasses.dataclass(frozen=True)
class StarEndpointData:
    """ln f* at the left end, midpoint, and right end of the interval."""

    ls_a: float
    ls_m: float
    ls_b: float

    def __post_init__(self):
        for name in ("ls_a", "ls_m", "ls_b"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError("%s is not finite: %r" % (name, getattr(self, name)))


@dataclasses.dataclass(frozen=True)
class MBound:
    """log of a uniform bound M with f* <= M (strict) or |ln f*| <= ln M
    (robust) on the interval; validated against a grid before use."""

    m_log: float


def _bound_report(name, mode, lhs, rhs):
    margin = float(rhs) - float(lhs)
    return BoundReport(name=name, mode=mode, lhs_log=float(lhs), rhs_log=float(rhs),
                       margin=margin, holds=bool(margin >= -HOLDS_SLACK))


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError("mode must be one of %s, got %r" % (", ".join(MODES), mode))


def _shape(x, mode):
    return abs(x) if mode == "robust" else x


def star_endpoints(model, iv):
    vals = star_values(model, np.array([iv.a, iv.midpoint, iv.b]))
    return StarEndpointData(ls_a=float(vals[0]), ls_m=float(vals[1]), ls_b=float(vals[2]))


def _star_grid(model, iv, n=_GRID_N):
    ts = np.linspace(iv.a, iv.b, n)
    return ts, np.asarray(star_values(model, ts), dtype=float)


def validate_m_bound(model, iv, m, mode, n=_GRID_N):
    """Grid check that m really dominates ln f* in the given mode's sense;
    raises MBoundViolation naming the worst offending point."""
    _check_mode(mode)
    ts, ls = _star_grid(model, iv, n)
    shaped = np.abs(ls) if mode == "robust" else ls
    worst = int(np.argmax(shaped - m.m_log))
    if shaped[worst] > m.m_log + 1e-9:
        raise MBoundViolation("m_log=%r is not an upper bound: ln f* term %r at t=%r (mode %s)"
                              % (m.m_log, float(shaped[worst]), float(ts[worst]), mode))


def grid_sup_m_bound(model, iv, mode, n=_GRID_N):
    """The tightest grid-based MBound for this model and mode."""
    _check_mode(mode)
    _, ls = _star_grid(model, iv, n)
    shaped = np.abs(ls) if mode == "robust" else ls
    return MBound(m_log=float(np.max(shaped)))


def _warn_unless(condition, message):
    if not condition:
        warnings.warn(message, HypothesisWarning, stacklevel=3)


def _advise_star_convex(model, iv, check_hypothesis):
    if check_hypothesis:
        ok = is_mul_convex_sampled(star_model(model), iv, n_pairs=_HYPOTHESIS_PAIRS, seed=0)
        _warn_unless(ok, "ln f* does not look convex on %r for %s; the bound's "
                         "hypothesis fails and the report is advisory" % (iv, model.label or "model"))


def hh_check(model, iv, quad=None, mode="strict", check_hypothesis=True):
    """The two-sided sandwich on the log integral mean:

        ln f(m)  <=  mean  <=  (ln f(a) + ln f(b)) / 2

    Returns (left report, right report).  Needs f itself multiplicatively
    convex; no ln f* terms appear, so `mode` only labels the reports.
    """
    _check_mode(mode)
    if quad is None:
        quad = QuadratureConfig()
    if check_hypothesis:
        ok = is_mul_convex_sampled(model, iv, n_pairs=_HYPOTHESIS_PAIRS, seed=0)
        _warn_unless(ok, "%s does not look multiplicatively convex on %r; the "
                         "sandwich may fail legitimately" % (model.label or "model", iv))
    mean = mean_log(model, iv, quad)
    ln_fm = float(model.ln_f(iv.midpoint))
    avg = 0.5 * (float(model.ln_f(iv.a)) + float(model.ln_f(iv.b)))
    return (_bound_report("hh_left", mode, ln_fm, mean),
            _bound_report("hh_right", mode, mean, avg))


def midpoint_bound(model, iv, quad=None, mode="strict", check_hypothesis=True):
    """|ln f(m) - mean| against the Simpson-weighted endpoint combination
    (b-a)/24 * (s(ls_a) + 4 s(ls_m) + s(ls_b))."""
    _check_mode(mode)
    if quad is None:
        quad = QuadratureConfig()
    _advise_star_convex(model, iv, check_hypothesis)
    lhs = abs(float(model.ln_f(iv.midpoint)) - mean_log(model, iv, quad))
    se = star_endpoints(model, iv)
    rhs = (iv.length / 24.0) * (_shape(se.ls_a, mode) + 4.0 * _shape(se.ls_m, mode)
                                + _shape(se.ls_b, mode))
    return _bound_report("midpoint", mode, lhs, rhs)


def midpoint_bound_M(model, iv, quad=None, m=None, mode="strict", check_hypothesis=True):
    """Midpoint deviation against the uniform-bound form (b-a)/4 * ln M.
    m defaults to the grid supremum for the mode; an explicit m is
    validated against the grid first."""
    _check_mode(mode)
    if quad is None:
        quad = QuadratureConfig()
    _advise_star_convex(model, iv, check_hypothesis)
    if m is None:
        m = grid_sup_m_bound(model, iv, mode)
    else:
        validate_m_bound(model, iv, m, mode)
    lhs = abs(float(model.ln_f(iv.midpoint)) - mean_log(model, iv, quad))
    return _bound_report("midpoint_m", mode, lhs, 0.25 * iv.length * m.m_log)


def midpoint_bound_geo(model, iv, quad=None, mode="strict", check_hypothesis=True):
    """Midpoint deviation against the endpoint-only form
    (b-a)/8 * (s(ls_a) + s(ls_b))."""
    _check_mode(mode)
    if quad is None:
        quad = QuadratureConfig()
    _advise_star_convex(model, iv, check_hypothesis)
    lhs = abs(float(model.ln_f(iv.midpoint)) - mean_log(model, iv, quad))
    se = star_endpoints(model, iv)
    rhs = (iv.length / 8.0) * (_shape(se.ls_a, mode) + _shape(se.ls_b, mode))
    return _bound_report("midpoint_geo", mode, lhs, rhs)


def trapezoid_bound(model, iv, quad=None, mode="strict", check_hypothesis=True):
    """|log G(f(a), f(b)) - mean| against (b-a)/8 * (s(ls_a) + s(ls_b))."""
    _check_mode(mode)
    if quad is None:
        quad = QuadratureConfig()
    _advise_star_convex(model, iv, check_hypothesis)
    avg = 0.5 * (float(model.ln_f(iv.a)) + float(model.ln_f(iv.b)))
    lhs = abs(avg - mean_log(model, iv, quad))
    se = star_endpoints(model, iv)
    rhs = (iv.length / 8.0) * (_shape(se.ls_a, mode) + _shape(se.ls_b, mode))
    return _bound_report("trapezoid", mode, lhs, rhs)


def trapezoid_bound_M(model, iv, quad=None, m=None, mode="strict", check_hypothesis=True):
    """Trapezoid deviation against the uniform-bound form (b-a)/4 * ln M."""
    _check_mode(mode)
    if quad is None:
        quad = QuadratureConfig()
    _advise_star_convex(model, iv, check_hypothesis)
    if m is None:
        m = grid_sup_m_bound(model, iv, mode)
    else:
        validate_m_bound(model, iv, m, mode)
    avg = 0.5 * (float(model.ln_f(iv.a)) + float(model.ln_f(iv.b)))
    lhs = abs(avg - mean_log(model, iv, quad))
    return _bound_report("trapezoid_m", mode, lhs, 0.25 * iv.length * m.m_log)
