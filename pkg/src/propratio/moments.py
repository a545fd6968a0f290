"""First-order bias/MSE theory for every estimator tier.

Under SRSWOR with f = 1/n - 1/N, the relative deviations e_p = (p-P)/P
and e_x = (x_bar-X_bar)/X_bar satisfy

    E[e_p] = E[e_x] = 0,
    E[e_p^2] = f C_p^2,   E[e_x^2] = f C_x^2,   E[e_p e_x] = f rho C_p C_x,

and expanding each estimator to second order in (e_p, e_x) gives the
closed forms below (all exact identities at order f; the sampling engine's
exact enumeration is the oracle for the moment block, and Monte Carlo
covers designs too large to enumerate).

For the tier-3 family the combined ratio-power/exponential factor expands
as R = 1 - B*e_x + A*e_x^2 with

    theta = a*X_bar / (a*X_bar + b)
    B     = (alpha + beta/2) * theta
    A     = theta^2/8 * (4*alpha*(alpha+1) + beta*(beta+2) + 4*alpha*beta)

and the first-order MSE becomes a convex quadratic in the weights
(q1, q2); see MseQuadratic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateAuxiliary, DomainError, SingularSystem
from .estimators import RatioExpParams, SmoothFamily
from .population import PopulationSummary, fpc

__all__ = [
    "DesignMoments",
    "RatioExpCoefficients",
    "MseQuadratic",
    "OptimalWeights",
    "var_usual",
    "ratio_bias",
    "ratio_mse",
    "smooth_bias",
    "smooth_mse",
    "optimal_slope",
    "min_smooth_mse",
    "optimal_regression_slope",
    "ratio_exp_coefficients",
    "mse_quadratic",
    "mse_at_weights",
    "optimal_weights",
    "min_ratio_exp_mse",
    "ratio_exp_bias",
    "pre",
    "beats_usual",
    "beats_regression",
]

SINGULARITY_RTOL = 1e-9


@dataclass(frozen=True)
class DesignMoments:
    """A sampling design: finite-population factor plus population summary."""

    f: float
    summary: PopulationSummary

    @classmethod
    def for_design(cls, summary: PopulationSummary, n: int, n_pop: int) -> "DesignMoments":
        return cls(f=fpc(n, n_pop), summary=summary)


def var_usual(dm: DesignMoments) -> float:
    """Variance of the sample proportion, f * P^2 * C_p^2 (= f * S_p^2)."""
    s = dm.summary
    return dm.f * s.p * s.p * s.c_p * s.c_p


def ratio_bias(dm: DesignMoments) -> float:
    """First-order bias of the ratio estimate: f * P * (C_x^2 - rho C_p C_x)."""
    s = dm.summary
    return dm.f * s.p * (s.c_x * s.c_x - s.rho_pb * s.c_p * s.c_x)


def ratio_mse(dm: DesignMoments) -> float:
    """First-order MSE of the ratio estimate:
    f * P^2 * (C_p^2 + C_x^2 - 2 rho C_p C_x)."""
    s = dm.summary
    return dm.f * s.p * s.p * (
        s.c_p * s.c_p + s.c_x * s.c_x - 2.0 * s.rho_pb * s.c_p * s.c_x
    )


def smooth_bias(dm: DesignMoments, family: SmoothFamily) -> float:
    """First-order bias of a smooth-family member from its Taylor data."""
    s = dm.summary
    return dm.f * (
        s.p * s.rho_pb * s.c_p * s.c_x * family.curv_pu
        + s.c_x * s.c_x * family.curv_uu
        + s.p * s.p * s.c_p * s.c_p * family.curv_pp
    )


def smooth_mse(dm: DesignMoments, slope: float) -> float:
    """First-order MSE of a smooth-family member; depends only on dH/du."""
    s = dm.summary
    return dm.f * (
        s.p * s.p * s.c_p * s.c_p
        + slope * slope * s.c_x * s.c_x
        + 2.0 * slope * s.p * s.rho_pb * s.c_p * s.c_x
    )


def optimal_slope(dm: DesignMoments) -> float:
    """The dH/du value minimizing smooth_mse: -rho * P * C_p / C_x."""
    s = dm.summary
    if s.c_x == 0.0:
        raise DegenerateAuxiliary("optimal slope undefined: C_x = 0")
    return -s.rho_pb * s.p * s.c_p / s.c_x


def min_smooth_mse(dm: DesignMoments) -> float:
    """Minimum first-order MSE over the smooth family:
    f * P^2 * C_p^2 * (1 - rho^2).

    Also the first-order MSE of the difference comparator at its optimal
    slope, so it doubles as the regression benchmark.
    """
    s = dm.summary
    return dm.f * s.p * s.p * s.c_p * s.c_p * (1.0 - s.rho_pb * s.rho_pb)


def optimal_regression_slope(summary: PopulationSummary) -> float:
    """Population-optimal difference slope rho_pb * S_p / S_x."""
    return summary.rho_pb * math.sqrt(summary.s_p_sq) / math.sqrt(summary.s_x_sq)


@dataclass(frozen=True)
class RatioExpCoefficients:
    """Expansion coefficients of the tier-3 ratio-exponential factor.

    shrink is theta = a*X_bar/(a*X_bar + b) in (0, 1]; the factor expands
    as 1 - ex_coef * e_x + ex2_coef * e_x^2.
    """

    shrink: float
    ex_coef: float
    ex2_coef: float


def ratio_exp_coefficients(
    alpha: float, beta: float, a: float, b: float, x_bar_pop: float
) -> RatioExpCoefficients:
    """Compute (theta, B, A) for given exponents and auxiliary scaling."""
    scaled = a * x_bar_pop + b
    if scaled <= 0.0:
        raise DomainError(f"a*X_bar + b must be positive, got {scaled}")
    theta = a * x_bar_pop / scaled
    ex_coef = (alpha + beta / 2.0) * theta
    ex2_coef = theta * theta / 8.0 * (
        4.0 * alpha * (alpha + 1.0) + beta * (beta + 2.0) + 4.0 * alpha * beta
    )
    return RatioExpCoefficients(shrink=theta, ex_coef=ex_coef, ex2_coef=ex2_coef)


@dataclass(frozen=True)
class MseQuadratic:
    """First-order MSE of the tier-3 family as a quadratic in (q1, q2).

    With w = (q1, q2), MSE(w) = base + w' G w - 2 w' c where base = P^2,
    G = [[g11, g12], [g12, g22]] and c = (c1, c2).  The five building
    blocks are the second-moment pieces of the expansion:

        var_prop    first-order variance of the proportion channel p*R
        var_diff    first-order variance of the difference channel
        curv_prop   coupling of the proportion channel with its curvature
        cross_lin   linear cross term between the two channels
        cross_curv  curvature cross term (difference channel)
    """

    base: float
    var_prop: float
    var_diff: float
    curv_prop: float
    cross_lin: float
    cross_curv: float
    g11: float
    g12: float
    g22: float
    c1: float
    c2: float

    @classmethod
    def from_parts(
        cls, base, var_prop, var_diff, curv_prop, cross_lin, cross_curv
    ) -> "MseQuadratic":
        return cls(
            base=base,
            var_prop=var_prop,
            var_diff=var_diff,
            curv_prop=curv_prop,
            cross_lin=cross_lin,
            cross_curv=cross_curv,
            g11=base + var_prop + 2.0 * curv_prop,
            g12=-cross_lin - cross_curv,
            g22=var_diff,
            c1=base + curv_prop,
            c2=-cross_curv,
        )


def mse_quadratic(dm: DesignMoments, coeffs: RatioExpCoefficients) -> MseQuadratic:
    """Assemble the weight quadratic for one (alpha, beta, a, b) choice."""
    s = dm.summary
    f, p, xb = dm.f, s.p, s.x_bar_pop
    cp, cx, rho = s.c_p, s.c_x, s.rho_pb
    bb, aa = coeffs.ex_coef, coeffs.ex2_coef
    cx2 = cx * cx
    rpc = rho * cp * cx
    return MseQuadratic.from_parts(
        base=p * p,
        var_prop=p * p * f * (cp * cp + bb * bb * cx2 - 2.0 * bb * rpc),
        var_diff=xb * xb * f * cx2,
        curv_prop=p * p * f * (aa * cx2 - bb * rpc),
        cross_lin=p * xb * f * (-bb * cx2 + rpc),
        cross_curv=xb * p * f * (-bb * cx2),
    )


def mse_at_weights(q1: float, q2: float, quad: MseQuadratic) -> float:
    """Evaluate the first-order MSE at weights (q1, q2).

    Uses the building-block form, whose terms are all O(f) apart from the
    (q1-1)^2 * base term, so no large cancellation occurs near q1 = 1.
    """
    return (
        (q1 - 1.0) ** 2 * quad.base
        + q1 * q1 * (quad.var_prop + 2.0 * quad.curv_prop)
        + q2 * q2 * quad.var_diff
        + 2.0 * q1 * q2 * (-quad.cross_lin - quad.cross_curv)
        - 2.0 * q1 * quad.curv_prop
        + 2.0 * q2 * quad.cross_curv
    )


@dataclass(frozen=True)
class OptimalWeights:
    q1: float
    q2: float


def _determinant(quad: MseQuadratic) -> float:
    det = quad.g11 * quad.g22 - quad.g12 * quad.g12
    scale = max(abs(quad.g11 * quad.g22), quad.g12 * quad.g12)
    if det <= SINGULARITY_RTOL * scale:
        raise SingularSystem(
            f"weight normal equations are singular or indefinite (det={det})"
        )
    return det


def optimal_weights(quad: MseQuadratic) -> OptimalWeights:
    """Solve the normal equations G w = c for the MSE-minimizing weights."""
    det = _determinant(quad)
    return OptimalWeights(
        q1=(quad.g22 * quad.c1 - quad.g12 * quad.c2) / det,
        q2=(quad.g11 * quad.c2 - quad.g12 * quad.c1) / det,
    )


def min_ratio_exp_mse(quad: MseQuadratic) -> float:
    """Minimum of the weight quadratic, base - c' G^-1 c.

    Evaluated in the algebraically equivalent cancellation-free form

        [P^2 (M1 M2 - M4^2) - (M2 M3^2 - 2 M3 M4 M5 + M1 M5^2)] / det(G)

    (M's are the building blocks) in which the P^4-scale terms of the
    direct expression cancel symbolically instead of numerically; the
    direct form loses ~4 digits when the minimum is far below P^2, this
    one does not.  Equality with mse_at_weights at the optimum holds to
    1e-12 relative.
    """
    det = _determinant(quad)
    m1, m2 = quad.var_prop, quad.var_diff
    m3, m4, m5 = quad.curv_prop, quad.cross_lin, quad.cross_curv
    numerator = quad.base * (m1 * m2 - m4 * m4) - (
        m2 * m3 * m3 - 2.0 * m3 * m4 * m5 + m1 * m5 * m5
    )
    return numerator / det


def ratio_exp_bias(
    dm: DesignMoments, params: RatioExpParams, coeffs: RatioExpCoefficients
) -> float:
    """First-order bias of the tier-3 family at given weights."""
    s = dm.summary
    bb, aa = coeffs.ex_coef, coeffs.ex2_coef
    return s.p * (params.q1 - 1.0) + dm.f * (
        (params.q2 * s.x_bar_pop * bb + params.q1 * s.p * aa) * s.c_x * s.c_x
        - params.q1 * s.p * bb * s.rho_pb * s.c_p * s.c_x
    )


def pre(mse_ref: float, mse: float) -> float:
    """Percent relative efficiency 100 * mse_ref / mse."""
    if mse == 0.0:
        raise ZeroDivisionError("PRE undefined for zero MSE")
    return 100.0 * mse_ref / mse


def beats_usual(dm: DesignMoments, quad: MseQuadratic) -> bool:
    """True iff the optimized tier-3 MSE is <= the variance of p.

    Holds identically: the weights (1, -P*B/X_bar) reproduce the plain
    proportion to first order, and at that point the quadratic equals
    f P^2 C_p^2 exactly, so the minimum can only be smaller.  A census
    (f = 0) trivially satisfies 0 <= 0.
    """
    if dm.f == 0.0:
        return True
    return min_ratio_exp_mse(quad) <= var_usual(dm)


def beats_regression(dm: DesignMoments, quad: MseQuadratic) -> bool:
    """True iff the optimized tier-3 MSE is <= the regression benchmark."""
    if dm.f == 0.0:
        return True
    return min_ratio_exp_mse(quad) <= min_smooth_mse(dm)
