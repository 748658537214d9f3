"""Named special cases of the bivariate family.

Each entry maps natural parameters (rates, shapes, scales) to the
(c, alpha, beta, theta) parameterization and, where tractable, attaches
closed-form marginal distribution / survival functions and the joint
survival, which double as oracles against the generic numeric machinery.

The Pareto I marginals carry a location offset sigma_i (their support
starts at sigma_i, not 0); the offset scales with (1 + theta*u1) in the
conditional, consistent with multiplying the whole quantile function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, UnsupportedCaseError
from .model import (
    BivariateParams,
    DEFAULT_NUMERIC_CONFIG,
    MarginalParams,
    NumericConfig,
    f1,
)
from .specfun import complete_beta, inv_reg_inc_beta

__all__ = ["CatalogEntry", "CATALOG_NAMES", "make_case",
           "closed_marginal_cdf", "closed_marginal_survival",
           "closed_conditional_survival", "closed_joint_survival",
           "generic_marginal_cdf", "generic_joint_survival"]

CATALOG_NAMES = (
    "complementary-beta", "power", "uniform", "exponential", "rescaled-beta",
    "pareto2", "pareto1", "loglogistic", "govindarajulu", "sine", "scaled-t2",
)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    natural: dict
    params: BivariateParams
    loc: tuple[float, float] = (0.0, 0.0)
    has_marginal_cdf: bool = True
    has_conditional_survival: bool = True
    has_joint_survival: bool = True
    notes: tuple[str, ...] = field(default=())


def _pos(natural: dict, *names: str) -> None:
    for n in names:
        v = natural[n]
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise DomainError(f"parameter {n} must be a positive real, got {v!r}")


def _theta(natural: dict) -> float:
    th = float(natural.get("theta", 0.0))
    if not (math.isfinite(th) and th >= 0.0):
        raise DomainError(f"theta must be >= 0, got {th}")
    return th


def make_case(name: str, **natural: float) -> CatalogEntry:
    """Build a catalog entry from natural parameters.

    Parameter conventions per case:

    - complementary-beta: c1, alpha1, beta1, c2, alpha2, beta2 (alpha, beta > -1)
    - power:        a1, b1, a2, b2         F_i(x) = (x/b_i)^a_i
    - uniform:      b1, b2                 power with a_i = 1
    - exponential:  c1, c2                 S_i(x) = exp(-x/c_i)
    - rescaled-beta: a1, b1, a2, b2        S_i(x) = (1 - x/b_i)^a_i
    - pareto2:      d1, b1, d2, b2         S_i(x) = (1 + x/b_i)^-d_i
    - pareto1:      sigma1, a1, sigma2, a2 S_i(x) = (x/sigma_i)^-a_i, x > sigma_i
    - loglogistic:  a1, b1, a2, b2         S_i(x) = (1 + (x/b_i)^(1/a_i))^-1
    - govindarajulu: sigma1, b1, sigma2, b2 (no closed distribution function)
    - sine:         scale1, scale2         f_i(x) = (pi/2s) sin(pi x / s)
    - scaled-t2:    c1, c2                 heavy-tailed, support the whole line

    All cases accept theta (default 0).
    """
    th = _theta(natural)

    def bp(m1: MarginalParams, m2: MarginalParams) -> BivariateParams:
        return BivariateParams(m1, m2, th)

    if name == "complementary-beta":
        _pos(natural, "c1", "c2")
        for k in ("alpha1", "beta1", "alpha2", "beta2"):
            if not natural[k] > -1.0:
                raise DomainError(f"{k} must exceed -1 for the complementary-beta case")
        m1 = MarginalParams(natural["c1"], natural["alpha1"], natural["beta1"])
        m2 = MarginalParams(natural["c2"], natural["alpha2"], natural["beta2"])
        return CatalogEntry(name, dict(natural), bp(m1, m2))

    if name in ("power", "uniform"):
        if name == "uniform":
            natural = {"a1": 1.0, "b1": natural["b1"], "a2": 1.0,
                       "b2": natural["b2"], "theta": th}
        _pos(natural, "a1", "b1", "a2", "b2")
        ms = [MarginalParams(natural[f"b{i}"] / natural[f"a{i}"],
                             1.0 / natural[f"a{i}"] - 1.0, 0.0) for i in (1, 2)]
        return CatalogEntry(name, dict(natural), bp(*ms))

    if name == "exponential":
        _pos(natural, "c1", "c2")
        ms = [MarginalParams(natural[f"c{i}"], 0.0, -1.0) for i in (1, 2)]
        return CatalogEntry(name, dict(natural), bp(*ms))

    if name == "rescaled-beta":
        _pos(natural, "a1", "b1", "a2", "b2")
        ms = [MarginalParams(natural[f"b{i}"] / natural[f"a{i}"], 0.0,
                             1.0 / natural[f"a{i}"] - 1.0) for i in (1, 2)]
        return CatalogEntry(name, dict(natural), bp(*ms))

    if name == "pareto2":
        # Q(u) = b ((1-u)^(-1/d) - 1) differentiates to q = (b/d) (1-u)^(-1/d-1)
        _pos(natural, "d1", "b1", "d2", "b2")
        ms = [MarginalParams(natural[f"b{i}"] / natural[f"d{i}"], 0.0,
                             -1.0 - 1.0 / natural[f"d{i}"]) for i in (1, 2)]
        return CatalogEntry(name, dict(natural), bp(*ms))

    if name == "pareto1":
        _pos(natural, "sigma1", "a1", "sigma2", "a2")
        ms = [MarginalParams(natural[f"sigma{i}"] / natural[f"a{i}"], 0.0,
                             -1.0 - 1.0 / natural[f"a{i}"]) for i in (1, 2)]
        return CatalogEntry(name, dict(natural), bp(*ms),
                            loc=(natural["sigma1"], natural["sigma2"]))

    if name == "loglogistic":
        _pos(natural, "a1", "b1", "a2", "b2")
        ms = [MarginalParams(natural[f"a{i}"] * natural[f"b{i}"],
                             natural[f"a{i}"] - 1.0,
                             -(natural[f"a{i}"] + 1.0)) for i in (1, 2)]
        return CatalogEntry(name, dict(natural), bp(*ms))

    if name == "govindarajulu":
        _pos(natural, "sigma1", "b1", "sigma2", "b2")
        ms = [MarginalParams(natural[f"sigma{i}"] * natural[f"b{i}"] * (natural[f"b{i}"] + 1.0),
                             natural[f"b{i}"] - 1.0, 1.0) for i in (1, 2)]
        return CatalogEntry(name, dict(natural), bp(*ms),
                            has_marginal_cdf=False,
                            has_conditional_survival=False,
                            has_joint_survival=False,
                            notes=("no closed distribution function",))

    if name == "sine":
        _pos(natural, "scale1", "scale2")
        ms = [MarginalParams(natural[f"scale{i}"] / math.pi, -0.5, -0.5)
              for i in (1, 2)]
        return CatalogEntry(name, dict(natural), bp(*ms),
                            has_conditional_survival=False,
                            has_joint_survival=False,
                            notes=("marginal-only entry",))

    if name == "scaled-t2":
        _pos(natural, "c1", "c2")
        ms = [MarginalParams(natural[f"c{i}"], -1.5, -1.5) for i in (1, 2)]
        return CatalogEntry(name, dict(natural), bp(*ms),
                            has_conditional_survival=False,
                            has_joint_survival=False,
                            notes=("marginal-only entry", "support is the whole line"))

    raise DomainError(f"unknown catalog case {name!r}; known: {', '.join(CATALOG_NAMES)}")


# ---------------------------------------------------------------------------
# closed forms


def _nat(entry: CatalogEntry, key: str, i: int) -> float:
    return float(entry.natural[f"{key}{i}"])


def closed_marginal_cdf(entry: CatalogEntry, i: int, x: float) -> float:
    """Closed-form marginal distribution function of component i (1 or 2)."""
    if i not in (1, 2):
        raise DomainError("component index must be 1 or 2")
    if not entry.has_marginal_cdf:
        raise UnsupportedCaseError(
            f"case {entry.name!r} has no closed distribution function")
    name = entry.name
    if name == "complementary-beta":
        m = entry.params.m1 if i == 1 else entry.params.m2
        a, b = m.alpha + 1.0, m.beta + 1.0
        total = m.c * complete_beta(a, b)
        return inv_reg_inc_beta(min(max(x / total, 0.0), 1.0), a, b)
    if name in ("power", "uniform"):
        a, b = _nat(entry, "a", i), _nat(entry, "b", i)
        if x <= 0.0:
            return 0.0
        return min((x / b) ** a, 1.0)
    if name == "exponential":
        c = _nat(entry, "c", i)
        return -math.expm1(-x / c) if x > 0.0 else 0.0
    if name == "rescaled-beta":
        a, b = _nat(entry, "a", i), _nat(entry, "b", i)
        if x <= 0.0:
            return 0.0
        if x >= b:
            return 1.0
        return 1.0 - (1.0 - x / b) ** a
    if name == "pareto2":
        d, b = _nat(entry, "d", i), _nat(entry, "b", i)
        return 1.0 - (1.0 + x / b) ** (-d) if x > 0.0 else 0.0
    if name == "pareto1":
        s, a = _nat(entry, "sigma", i), _nat(entry, "a", i)
        return 1.0 - (x / s) ** (-a) if x > s else 0.0
    if name == "loglogistic":
        a, b = _nat(entry, "a", i), _nat(entry, "b", i)
        if x <= 0.0:
            return 0.0
        return 1.0 - 1.0 / (1.0 + (x / b) ** (1.0 / a))
    if name == "sine":
        s = _nat(entry, "scale", i)
        if x <= 0.0:
            return 0.0
        if x >= s:
            return 1.0
        return 0.5 * (1.0 - math.cos(math.pi * x / s))
    if name == "scaled-t2":
        c = _nat(entry, "c", i)
        return 0.5 * (1.0 + x / math.sqrt(16.0 * c * c + x * x))
    raise UnsupportedCaseError(f"no closed distribution function for {entry.name!r}")


def closed_marginal_survival(entry: CatalogEntry, i: int, x: float) -> float:
    return 1.0 - closed_marginal_cdf(entry, i, x)


def closed_conditional_survival(entry: CatalogEntry, u1: float, x2: float) -> float:
    """Closed-form survival of X2 given X1 beyond its u1-quantile."""
    if not entry.has_conditional_survival:
        raise UnsupportedCaseError(
            f"case {entry.name!r} has no closed conditional survival")
    g = 1.0 + entry.params.theta * u1
    scaled = _scaled_entry(entry, g)
    return 1.0 - closed_marginal_cdf(scaled, 2, x2)


def closed_joint_survival(entry: CatalogEntry, x1: float, x2: float) -> float:
    """Closed-form product survival S1(x1) * S21(x2 | x1)."""
    if not entry.has_joint_survival:
        raise UnsupportedCaseError(f"case {entry.name!r} has no closed joint survival")
    u1_val = closed_marginal_cdf(entry, 1, x1)
    return (1.0 - u1_val) * closed_conditional_survival(entry, u1_val, x2)


def _scaled_entry(entry: CatalogEntry, g: float) -> CatalogEntry:
    """Entry whose second marginal quantile function is multiplied by g."""
    natural = dict(entry.natural)
    name = entry.name
    if name in ("power", "uniform", "rescaled-beta", "pareto2", "loglogistic"):
        natural["b2"] = natural.get("b2", 1.0) * g
    elif name == "exponential" or name == "scaled-t2":
        natural["c2"] = natural["c2"] * g
    elif name == "pareto1":
        natural["sigma2"] = natural["sigma2"] * g
    elif name == "sine":
        natural["scale2"] = natural["scale2"] * g
    elif name == "complementary-beta":
        natural["c2"] = natural["c2"] * g
    else:
        raise UnsupportedCaseError(f"cannot scale case {entry.name!r}")
    if name == "uniform":
        # uniform entries re-enter make_case through the power mapping
        return make_case("power", a1=1.0, b1=natural["b1"], a2=1.0,
                         b2=natural["b2"], theta=natural.get("theta", 0.0))
    return make_case(name, **natural)


# ---------------------------------------------------------------------------
# generic (numeric) counterparts, location-aware


def generic_marginal_cdf(entry: CatalogEntry, i: int, x: float,
                         cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> float:
    """Marginal CDF through the generic inversion machinery."""
    m = entry.params.m1 if i == 1 else entry.params.m2
    return f1(m, x - entry.loc[i - 1], cfg)


def generic_joint_survival(entry: CatalogEntry, x1: float, x2: float,
                           cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> float:
    """Product survival through the generic machinery, honoring locations."""
    u1_val = f1(entry.params.m1, x1 - entry.loc[0], cfg)
    g = 1.0 + entry.params.theta * u1_val
    m2s = entry.params.m2.scaled(g)
    s2 = 1.0 - f1(m2s, x2 - entry.loc[1] * g, cfg)
    return (1.0 - u1_val) * s2
