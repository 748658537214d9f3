"""Bivariate L-comoments: population values by quadrature, sample estimators.

Directed L-comoments of the family, defined through the product-form
joint survival parametrized over the unit square:

    L_k(1,2) = g_k int int (1-u1) (u2 - u21) W_k(u2) q1(u1) du1 du2
    L_k(2,1) = g_k int int (1-u1) (u2 - u21) W_k(u1) q2(u2) du1 du2

with W_2 = 1 (g_2 = 2), W_3 = 12t - 6, W_4 = 60t^2 - 60t + 12, and u21
the conditional probability level from the model.  L-correlations divide
by the leading variable's second L-moment.

The (2,1) direction reduces exactly to a one-dimensional integral: the
inner u2-integral against q2 equals the difference between conditional
and marginal partial means,

    J(u1) = theta*u1*l1_2 - g*(l1_2 - c2 B_w(alpha2+1, beta2+2)),

with g = 1 + theta*u1 and Q2(w) = Q2(1)/g; for beta2 <= -1 the second
term vanishes and J is exactly linear in u1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .data import PairedSample
from .errors import DivergentMomentError, InsufficientDataError
from .lmom import population_lmoments, sample_lmoments
from .model import (
    BivariateParams,
    DEFAULT_NUMERIC_CONFIG,
    NumericConfig,
    _quad,
    quad_beta_kernel,
    u21,
)
from .specfun import complete_beta, gauss_2f1, inv_reg_inc_beta, reg_inc_beta

__all__ = ["LComomentSet", "PowerLcovComparison", "population_lcomoments",
           "power_case_lcov_closed_form", "power_case_lcov_hypergeometric",
           "sample_lcomoments"]

_WEIGHTS = {
    2: (2.0, lambda t: 1.0),
    3: (1.0, lambda t: 12.0 * t - 6.0),
    4: (1.0, lambda t: (60.0 * t - 60.0) * t + 12.0),
}

# 96-point Gauss-Legendre rule mapped to (0, 1) for the inner comoment
# integrals; exact to machine precision on the closed-form u21 branches
_GL_X, _GL_WRAW = np.polynomial.legendre.leggauss(96)
_GL_S = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_WRAW


@dataclass(frozen=True)
class LComomentSet:
    """Directed L-comoments, L-correlations, and normalized higher ratios.

    rho12 = L2(1,2) / lambda2(X1); ratio3_12 = L3(1,2) / lambda2(X1), and
    mirrored for the (2,1) direction.
    """

    l2_12: float
    l3_12: float
    l4_12: float
    l2_21: float
    l3_21: float
    l4_21: float
    rho12: float
    rho21: float
    ratio3_12: float
    ratio4_12: float
    ratio3_21: float
    ratio4_21: float


def _build_set(l12: tuple[float, float, float], l21: tuple[float, float, float],
               lam2_1: float, lam2_2: float) -> LComomentSet:
    return LComomentSet(
        l2_12=l12[0], l3_12=l12[1], l4_12=l12[2],
        l2_21=l21[0], l3_21=l21[1], l4_21=l21[2],
        rho12=l12[0] / lam2_1, rho21=l21[0] / lam2_2,
        ratio3_12=l12[1] / lam2_1, ratio4_12=l12[2] / lam2_1,
        ratio3_21=l21[1] / lam2_2, ratio4_21=l21[2] / lam2_2,
    )


def population_lcomoments(bp: BivariateParams,
                          cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG
                          ) -> LComomentSet:
    """Population L-comoments of the family by quadrature.

    Requires both marginals in the finite-mean region.  theta = 0 returns
    exact zeros.
    """
    m1, m2 = bp.m1, bp.m2
    for label, m in (("m1", m1), ("m2", m2)):
        if not m.in_lmoment_region():
            raise DivergentMomentError(
                f"L-comoments need alpha > -1, beta > -2 for {label}")
    lam2_1 = population_lmoments(m1).l2
    lam2_2 = population_lmoments(m2).l2
    if bp.theta == 0.0:
        z = (0.0, 0.0, 0.0)
        return _build_set(z, z, lam2_1, lam2_2)

    # (1,2): fixed-order inner rule over u2 at each outer u1 node; the
    # integrand is smooth apart from a (1-u2)^(beta2+1) kink, flattened
    # by the power substitution when beta2 < 0
    if m2.beta <= -1.0:
        # u21 reaches 1 with a (1-u2)^(1/(1+theta*u1)) kink whose exponent
        # varies with u1; a fixed stronger power flattens every case
        binv = 2.0 * (1.0 + bp.theta)
        t_nodes = 1.0 - _GL_S ** binv
        jac = binv * _GL_S ** (binv - 1.0) * _GL_W
    elif m2.beta < 0.0:
        binv = 1.0 / (m2.beta + 1.0)
        t_nodes = 1.0 - _GL_S ** binv
        jac = binv * _GL_S ** (binv - 1.0) * _GL_W
    else:
        t_nodes = _GL_S
        jac = _GL_W

    def inner_12(u1_val: float, wfun) -> float:
        total = 0.0
        for t, wt in zip(t_nodes, jac):
            total += (t - u21(bp, u1_val, t, cfg)) * wfun(t) * wt
        return total

    l12 = []
    for k in (2, 3, 4):
        gam, wfun = _WEIGHTS[k]
        val = gam * quad_beta_kernel(
            lambda u: m1.c * inner_12(u, wfun), m1.alpha, m1.beta + 1.0, cfg)
        l12.append(val)

    # (2,1): exact inner reduction to the partial-mean difference J(u1)
    th = bp.theta
    lam1_2 = population_lmoments(m2).l1
    if m2.beta <= -1.0:
        def jfun(u1_val: float) -> float:
            return th * u1_val * lam1_2
    else:
        a2, b2 = m2.alpha + 1.0, m2.beta + 1.0
        norm2 = complete_beta(a2, b2 + 1.0)

        def jfun(u1_val: float) -> float:
            g = 1.0 + th * u1_val
            w = inv_reg_inc_beta(1.0 / g, a2, b2)
            partial = m2.c * norm2 * reg_inc_beta(w, a2, b2 + 1.0)
            return th * u1_val * lam1_2 - g * (lam1_2 - partial)

    l21 = []
    for k in (2, 3, 4):
        gam, wfun = _WEIGHTS[k]
        val = gam * _quad(lambda u: (1.0 - u) * wfun(u) * jfun(u), 0.0, 1.0, cfg)
        l21.append(val)

    return _build_set(tuple(l12), tuple(l21), lam2_1, lam2_2)


@dataclass(frozen=True)
class PowerLcovComparison:
    """Published closed-form value of the power-case L-covariance vs quadrature.

    The published hypergeometric expression does not reproduce the
    defining integral (wrong sign and a dropped scale on its second
    term); it is retained verbatim for cross-checking, with the
    discrepancy reported alongside.
    """

    formula_value: float
    quadrature_value: float
    discrepancy: float


def power_case_lcov_closed_form(bp: BivariateParams,
                                cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG
                                ) -> PowerLcovComparison:
    """Evaluate the published power-case L2(1,2) expression and compare.

    Both marginals must have beta = 0 (power case).  The published form is

        -c1 a1 2F1(1/a1, a2; 1 + 1/a1; -theta)
            - (2F1(1 + 1/a1, a2; 2 + 1/a1; -theta) + a1) / (1 + a1)

    with a_i = 1/(alpha_i + 1).
    """
    _require_power(bp)
    a1 = 1.0 / (bp.m1.alpha + 1.0)
    a2 = 1.0 / (bp.m2.alpha + 1.0)
    th = bp.theta
    fa = gauss_2f1(1.0 / a1, a2, 1.0 + 1.0 / a1, -th)
    fb = gauss_2f1(1.0 + 1.0 / a1, a2, 2.0 + 1.0 / a1, -th)
    formula = -bp.m1.c * a1 * fa - (fb + a1) / (1.0 + a1)
    quadrature = population_lcomoments(bp, cfg).l2_12
    return PowerLcovComparison(formula, quadrature, quadrature - formula)


def power_case_lcov_hypergeometric(bp: BivariateParams) -> float:
    """Corrected hypergeometric closed form of the power-case L2(1,2).

    Derived from the Euler integral representation:

        L2(1,2) = c1 a1 [ a1/(1+a1) - F_A + F_B/(1+a1) ]

    with F_A = 2F1(a2, 1/a1; 1 + 1/a1; -theta) and
    F_B = 2F1(a2, 1 + 1/a1; 2 + 1/a1; -theta).  Used as an independent
    oracle for the quadrature path.
    """
    _require_power(bp)
    a1 = 1.0 / (bp.m1.alpha + 1.0)
    a2 = 1.0 / (bp.m2.alpha + 1.0)
    th = bp.theta
    fa = gauss_2f1(a2, 1.0 / a1, 1.0 + 1.0 / a1, -th)
    fb = gauss_2f1(a2, 1.0 + 1.0 / a1, 2.0 + 1.0 / a1, -th)
    return bp.m1.c * a1 * (a1 / (1.0 + a1) - fa + fb / (1.0 + a1))


def _require_power(bp: BivariateParams) -> None:
    if bp.m1.beta != 0.0 or bp.m2.beta != 0.0:
        raise DivergentMomentError(
            "power-case closed form requires beta1 = beta2 = 0")


# ---------------------------------------------------------------------------
# sample estimators


def _legendre(k: int, t: np.ndarray) -> np.ndarray:
    if k == 1:
        return 2.0 * t - 1.0
    if k == 2:
        return (6.0 * t - 6.0) * t + 1.0
    return ((20.0 * t - 30.0) * t + 12.0) * t - 1.0


def _sample_directed(lead: np.ndarray, cond: np.ndarray) -> tuple[float, float, float]:
    """Plug-in L-comoments of `lead` toward `cond`.

    Ranks of the conditioning variable (average ranks on ties) are mapped
    to r/(n+1); the k-th comoment is the centered sample covariance of
    `lead` with the shifted Legendre polynomial of the mapped ranks.
    """
    n = lead.size
    t = rankdata(cond, method="average") / (n + 1.0)
    out = []
    for k in (1, 2, 3):
        p = _legendre(k, t)
        out.append(float(np.mean((lead - lead.mean()) * (p - p.mean()))))
    return tuple(out)


def sample_lcomoments(s: PairedSample) -> LComomentSet:
    """Sample L-comoments of a paired sample (concomitant rank plug-in)."""
    if s.n < 4:
        raise InsufficientDataError(f"need at least 4 pairs, got {s.n}")
    x1 = np.asarray(s.x1, dtype=float)
    x2 = np.asarray(s.x2, dtype=float)
    l2_1 = sample_lmoments(x1).l2
    l2_2 = sample_lmoments(x2).l2
    if not (l2_1 > 0.0 and l2_2 > 0.0):
        raise InsufficientDataError("degenerate sample: zero L-scale")
    l12 = _sample_directed(x1, x2)
    l21 = _sample_directed(x2, x1)
    return _build_set(l12, l21, l2_1, l2_2)
