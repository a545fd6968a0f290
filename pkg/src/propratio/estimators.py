"""Point estimators of a population proportion using an auxiliary mean.

Three tiers of estimators are implemented, all functions of the sample
proportion p and of u = x_bar / X_bar (so u = 1 for a balanced sample):

  tier 1  ratio:          p * X_bar / x_bar
  tier 2  smooth family:  H(p, u) for a smooth H with H(p, 1) = p;
          members here: linear-difference  p + d*(u - 1)
                        power-ratio        p * u**g
                        exponential        p * exp(delta * (1-u)/(1+u))
  tier 3  ratio-exponential family with difference weights:
          [q1*p + q2*(X_bar - x_bar)] * ((a*X_bar+b)/(a*x_bar+b))**alpha
              * exp(beta * ((a*X_bar+b)-(a*x_bar+b)) / ((a*X_bar+b)+(a*x_bar+b)))

plus the plain proportion and the difference (regression-type) comparator
p + slope*(X_bar - x_bar).  Estimates are deliberately not clamped to
[0, 1]: the first-order theory describes the raw statistic.  Pass
clamp=True where a proportion is required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, ValidationError
from .population import SampleSummary

__all__ = [
    "FamilyKind",
    "SmoothFamily",
    "RatioExpParams",
    "usual_estimate",
    "ratio_estimate",
    "smooth_estimate",
    "ratio_exp_estimate",
    "regression_estimate",
    "smooth_value",
]

_FD_STEP = 1e-5  # first derivative
_FD_STEP2 = 1e-4  # second derivatives: eps/h^2 roundoff forces a wider step
_FD_TOL = 1e-6


class FamilyKind(str, Enum):
    """Concrete members of the smooth estimator family."""

    LINEAR_DIFFERENCE = "linear-difference"
    POWER_RATIO = "power-ratio"
    EXPONENTIAL = "exponential"


def smooth_value(kind: FamilyKind, shape: float, p: float, u: float) -> float:
    """Evaluate the smooth family member H(p, u).

    The power-ratio and exponential members need u > 0; the
    linear-difference member is defined for every real u.
    """
    if kind is FamilyKind.LINEAR_DIFFERENCE:
        return p + shape * (u - 1.0)
    if u <= 0.0:
        raise DomainError(f"{kind.value} family needs u > 0, got u={u}")
    if kind is FamilyKind.POWER_RATIO:
        return p * u**shape
    if kind is FamilyKind.EXPONENTIAL:
        return p * math.exp(shape * (1.0 - u) / (1.0 + u))
    raise ValidationError(f"unknown family kind {kind!r}")


@dataclass(frozen=True)
class SmoothFamily:
    """A smooth-family member anchored at the balance point (p_ref, 1).

    Derived fields are the Taylor data of H at that point:

        slope    dH/du
        curv_uu  (1/2) d2H/du2
        curv_pu  (1/2) d2H/dp du
        curv_pp  (1/2) d2H/dp2

    The analytic values are cross-checked against central finite
    differences at construction (tolerance 1e-6; step 1e-5 for the first
    derivative, 1e-4 for second differences where double-precision
    roundoff scales as eps/h^2), so a wrong hand derivative cannot enter
    the moment formulas silently.
    """

    kind: FamilyKind
    shape: float
    p_ref: float
    slope: float = field(init=False)
    curv_uu: float = field(init=False)
    curv_pu: float = field(init=False)
    curv_pp: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.p_ref < 1.0:
            raise ValidationError(f"p_ref must lie in (0, 1), got {self.p_ref}")
        kind, g, p = self.kind, self.shape, self.p_ref
        if kind is FamilyKind.LINEAR_DIFFERENCE:
            coeffs = (g, 0.0, 0.0, 0.0)
        elif kind is FamilyKind.POWER_RATIO:
            coeffs = (g * p, g * (g - 1.0) * p / 2.0, g / 2.0, 0.0)
        elif kind is FamilyKind.EXPONENTIAL:
            # H = p*exp(g*(1-u)/(1+u)); at u=1 the inner derivatives are
            # -g/2 and +g/2, hence dH/du = -g*p/2, d2H/du2 = p*(g/2 + g^2/4).
            coeffs = (-g * p / 2.0, p * (g / 2.0 + g * g / 4.0) / 2.0, -g / 4.0, 0.0)
        else:
            raise ValidationError(f"unknown family kind {kind!r}")
        for name, value in zip(("slope", "curv_uu", "curv_pu", "curv_pp"), coeffs):
            object.__setattr__(self, name, value)
        self._check_anchor()
        self._check_derivatives()

    def value(self, p: float, u: float) -> float:
        return smooth_value(self.kind, self.shape, p, u)

    def _check_anchor(self):
        for p in (0.1, self.p_ref, 0.9):
            got = self.value(p, 1.0)
            if not math.isclose(got, p, rel_tol=1e-12, abs_tol=1e-12):
                raise ValidationError(
                    f"family violates H(p, 1) = p: H({p}, 1) = {got}"
                )

    def _check_derivatives(self):
        h, h2, p = _FD_STEP, _FD_STEP2, self.p_ref
        f = self.value
        du = (f(p, 1 + h) - f(p, 1 - h)) / (2 * h)
        duu = (f(p, 1 + h2) - 2 * f(p, 1) + f(p, 1 - h2)) / (h2 * h2)
        dpu = (
            f(p + h2, 1 + h2) - f(p + h2, 1 - h2) - f(p - h2, 1 + h2) + f(p - h2, 1 - h2)
        ) / (4 * h2 * h2)
        dpp = (f(p + h2, 1) - 2 * f(p, 1) + f(p - h2, 1)) / (h2 * h2)
        checks = (
            (self.slope, du),
            (self.curv_uu, duu / 2.0),
            (self.curv_pu, dpu / 2.0),
            (self.curv_pp, dpp / 2.0),
        )
        for analytic, numeric in checks:
            if abs(analytic - numeric) > _FD_TOL * max(1.0, abs(analytic)):
                raise ValidationError(
                    f"analytic Taylor coefficient {analytic} disagrees with "
                    f"finite difference {numeric} for {self.kind.value}"
                )


@dataclass(frozen=True)
class RatioExpParams:
    """Parameters of the tier-3 ratio-exponential family.

    q1 weights the sample proportion, q2 the auxiliary difference
    (units 1/x, so q2*(X_bar - x_bar) is unitless); alpha and beta are
    the ratio-power and exponential exponents; a > 0 and b >= 0 rescale
    the auxiliary variable inside both factors.
    """

    q1: float
    q2: float
    alpha: float
    beta: float
    a: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValidationError(f"scale a must be positive, got {self.a}")
        if self.b < 0.0:
            raise ValidationError(f"shift b must be nonnegative, got {self.b}")


def _maybe_clamp(value: float, clamp: bool) -> float:
    if clamp:
        return min(1.0, max(0.0, value))
    return value


def usual_estimate(s: SampleSummary, clamp: bool = False) -> float:
    """The plain sample proportion."""
    return _maybe_clamp(s.p, clamp)


def ratio_estimate(s: SampleSummary, x_bar_pop: float, clamp: bool = False) -> float:
    """Tier-1 ratio estimate p * X_bar / x_bar."""
    if s.x_bar == 0.0:
        raise ZeroDivisionError("ratio estimate undefined: sample auxiliary mean is zero")
    return _maybe_clamp(s.p * x_bar_pop / s.x_bar, clamp)


def smooth_estimate(
    family: SmoothFamily, s: SampleSummary, x_bar_pop: float, clamp: bool = False
) -> float:
    """Tier-2 estimate H(p, u) with u = x_bar / X_bar."""
    if x_bar_pop == 0.0:
        raise ZeroDivisionError("smooth estimate undefined: population auxiliary mean is zero")
    return _maybe_clamp(family.value(s.p, s.x_bar / x_bar_pop), clamp)


def ratio_exp_estimate(
    params: RatioExpParams, s: SampleSummary, x_bar_pop: float, clamp: bool = False
) -> float:
    """Tier-3 weighted ratio-exponential estimate."""
    num = params.a * x_bar_pop + params.b
    den = params.a * s.x_bar + params.b
    if num <= 0.0:
        raise DomainError(f"a*X_bar + b must be positive, got {num}")
    if den <= 0.0:
        raise DomainError(f"a*x_bar + b must be positive, got {den}")
    head = params.q1 * s.p + params.q2 * (x_bar_pop - s.x_bar)
    value = head * (num / den) ** params.alpha * math.exp(
        params.beta * (num - den) / (num + den)
    )
    return _maybe_clamp(value, clamp)


def regression_estimate(
    s: SampleSummary, x_bar_pop: float, slope: float, clamp: bool = False
) -> float:
    """Difference comparator p + slope * (X_bar - x_bar).

    The population-optimal slope is rho_pb * S_p / S_x (see
    moments.optimal_regression_slope).
    """
    return _maybe_clamp(s.p + slope * (x_bar_pop - s.x_bar), clamp)
