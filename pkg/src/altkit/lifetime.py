"""Log-location-scale lifetime distributions and time transformations.

Both supported families are handled through one code path on the log-time
scale: lognormal uses the standard normal, and Weibull uses the smallest
extreme value distribution (shape beta = 1/sigma, scale eta = exp(mu)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.special import log_ndtr, ndtr, ndtri

from .errors import DomainError

FAMILIES = ("lognormal", "weibull")

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def std_cdf(z, family: str):
    """Standard cdf on the log scale: normal Phi or SEV 1 - exp(-exp(z))."""
    if family == "lognormal":
        return ndtr(z)
    if family == "weibull":
        return -np.expm1(-np.exp(z))
    raise DomainError(f"unknown family {family!r}")


def std_quantile(p, family: str):
    """Inverse of std_cdf."""
    if family == "lognormal":
        return ndtri(p)
    if family == "weibull":
        return np.log(-np.log1p(-np.asarray(p, dtype=float)))
    raise DomainError(f"unknown family {family!r}")


def std_logpdf(z, family: str):
    """Log of the standard density on the log scale."""
    z = np.asarray(z, dtype=float)
    if family == "lognormal":
        return -0.5 * z * z - _LOG_SQRT_2PI
    if family == "weibull":
        return z - np.exp(z)
    raise DomainError(f"unknown family {family!r}")


def std_logsf(z, family: str):
    """Log survival log[1 - Phi(z)], computed without cancellation."""
    z = np.asarray(z, dtype=float)
    if family == "lognormal":
        return log_ndtr(-z)
    if family == "weibull":
        return -np.exp(z)
    raise DomainError(f"unknown family {family!r}")


def std_dlogpdf(z, family: str):
    """Derivative of std_logpdf with respect to z."""
    z = np.asarray(z, dtype=float)
    if family == "lognormal":
        return -z
    if family == "weibull":
        return -np.expm1(z)
    raise DomainError(f"unknown family {family!r}")


def std_dlogsf(z, family: str):
    """Derivative of std_logsf with respect to z (negative hazard)."""
    z = np.asarray(z, dtype=float)
    if family == "lognormal":
        return -np.exp(std_logpdf(z, family) - std_logsf(z, family))
    if family == "weibull":
        return -np.exp(z)
    raise DomainError(f"unknown family {family!r}")


@dataclass(frozen=True)
class LifeDistribution:
    """A lognormal or Weibull lifetime via (mu, sigma) of log lifetime."""

    family: str
    mu: float
    sigma: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}")
        if not self.sigma > 0.0:
            raise DomainError("sigma must be > 0")

    @property
    def weibull_shape(self) -> float:
        if self.family != "weibull":
            raise DomainError("shape is defined for the weibull family only")
        return 1.0 / self.sigma

    @property
    def weibull_scale(self) -> float:
        if self.family != "weibull":
            raise DomainError("scale is defined for the weibull family only")
        return math.exp(self.mu)


def cdf(d: LifeDistribution, t: float) -> float:
    """Failure probability by time t > 0."""
    if t <= 0.0:
        raise DomainError("lifetime must be > 0")
    z = (math.log(t) - d.mu) / d.sigma
    return float(std_cdf(z, d.family))


def quantile(d: LifeDistribution, p: float) -> float:
    """Lifetime quantile exp(mu + z_p * sigma) for p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise DomainError("p must lie strictly inside (0, 1)")
    return math.exp(d.mu + float(std_quantile(p, d.family)) * d.sigma)


def saft_quantile(t_p_use: float, af: float) -> float:
    """Scale a use-condition quantile to the accelerated condition: t / AF."""
    if af <= 0.0:
        raise DomainError("acceleration factor must be > 0")
    return t_p_use / af


@dataclass(frozen=True)
class SaftModel:
    """A use-condition distribution plus an AF function of the condition.

    `af_model` maps a condition (any object the callable understands,
    typically a dict of variables) to a positive acceleration factor, and
    must return 1 at the use condition.
    """

    base: LifeDistribution
    af_model: Callable[[Any], float]


def saft_distribution_at(m: SaftModel, x) -> LifeDistribution:
    """Distribution at condition x: same family and sigma, mu shifted by -log AF(x)."""
    af = m.af_model(x)
    if af <= 0.0:
        raise DomainError(f"acceleration factor must be > 0, got {af}")
    return LifeDistribution(m.base.family, m.base.mu - math.log(af), m.base.sigma)


def ph_transform(f_use: LifeDistribution, psi: float, t_use: float) -> float:
    """Map a use-condition time through the proportional-hazards relation.

    Returns F^{-1}(1 - [1 - F(t_use)]^{1/psi}) evaluated in the use-condition
    distribution.  For a Weibull base this equals t_use / psi^{sigma}; for a
    lognormal base the ratio t_use / result varies with t_use, so the
    transform is not a scale change.
    """
    if psi <= 0.0:
        raise DomainError("psi must be > 0")
    if t_use <= 0.0:
        raise DomainError("lifetime must be > 0")
    z = (math.log(t_use) - f_use.mu) / f_use.sigma
    log_sf = float(std_logsf(z, f_use.family))
    # target cdf = 1 - sf^(1/psi), kept in log space for tail stability
    target = -math.expm1(log_sf / psi)
    if not 0.0 < target < 1.0:
        raise DomainError("transformed probability fell on a boundary; t_use too extreme")
    return quantile(f_use, target)


@dataclass(frozen=True)
class VaryingSigmaModel:
    """Location and log-scale as functions of the condition."""

    mu: Callable[[Any], float]
    log_sigma: Callable[[Any], float]
    family: str = "lognormal"

    def sigma(self, x) -> float:
        return math.exp(self.log_sigma(x))


def varying_sigma_quantile_ratio(m: VaryingSigmaModel, x, x_u, p: float) -> float:
    """Quantile ratio t_p(x_u)/t_p(x) when sigma depends on the condition.

    exp{mu(x_u) - mu(x) + z_p [sigma(x_u) - sigma(x)]}; the p-dependence is
    exactly what disqualifies the model from being a scale acceleration.
    """
    if not 0.0 < p < 1.0:
        raise DomainError("p must lie strictly inside (0, 1)")
    zp = float(std_quantile(p, m.family))
    return math.exp(m.mu(x_u) - m.mu(x) + zp * (m.sigma(x_u) - m.sigma(x)))


@dataclass(frozen=True)
class TimeTransformation:
    """A time map (t, x) -> transformed time, valid on a closed t-interval."""

    func: Callable[[float, Any], float]
    x_use: Any
    validity: tuple = (0.0, math.inf)

    def __call__(self, t: float, x) -> float:
        lo, hi = self.validity
        if not lo <= t <= hi:
            raise DomainError(f"t={t} outside validity interval [{lo}, {hi}]")
        return self.func(t, x)


@dataclass
class AxiomReport:
    """Result of checking the four time-transformation axioms on a grid."""

    zero_at_origin: bool | None
    nonnegative: bool
    strictly_increasing: bool
    identity_at_use: bool
    classification: str  # identity | accelerating | decelerating | crossing
    crossing_time: float | None = None
    failures: list = field(default_factory=list)

    @property
    def all_axioms_pass(self) -> bool:
        return (
            self.zero_at_origin in (True, None)
            and self.nonnegative
            and self.strictly_increasing
            and self.identity_at_use
        )


def _bisect_sign_change(g: Callable[[float], float], lo: float, hi: float) -> float:
    """Locate a root of g by bisection; g(lo) and g(hi) must differ in sign."""
    glo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gmid = g(mid)
        if gmid == 0.0 or hi - lo < 1e-12 * max(1.0, abs(hi)):
            return mid
        if (glo < 0.0) == (gmid < 0.0):
            lo, glo = mid, gmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def check_time_transformation(
    tt: TimeTransformation, t_grid, x_values, tol: float = 1e-9
) -> AxiomReport:
    """Check the axioms of a lifetime time transformation on sampled grids.

    Axioms: maps 0 to 0, stays nonnegative, strictly increases in t, and is
    the identity at the use condition.  The report also classifies the map
    against the diagonal: "accelerating" when transformed times fall below
    the original times everywhere on the grid, "decelerating" when above,
    "crossing" when the sign changes (the crossing is then located by
    bisection), and "identity" when indistinguishable from the diagonal.
    """
    t_grid = sorted(float(t) for t in t_grid)
    if len(t_grid) < 2:
        raise DomainError("need at least two grid times")
    failures: list[str] = []

    lo, hi = tt.validity
    zero_at_origin: bool | None = None
    if lo <= 0.0 <= hi:
        zero_at_origin = all(abs(tt(0.0, x)) <= tol for x in x_values)
        if not zero_at_origin:
            failures.append("a transformed time at t=0 is not 0")

    values = {x: [tt(t, x) for t in t_grid] for x in x_values}

    nonnegative = all(v >= -tol for vals in values.values() for v in vals)
    if not nonnegative:
        failures.append("a transformed time is negative")

    strictly_increasing = all(
        later > earlier for vals in values.values() for earlier, later in zip(vals, vals[1:])
    )
    if not strictly_increasing:
        failures.append("not strictly increasing in t")

    identity_at_use = all(
        abs(tt(t, tt.x_use) - t) <= tol * max(1.0, abs(t)) for t in t_grid
    )
    if not identity_at_use:
        failures.append("not the identity at the use condition")

    # Diagonal comparison at non-use conditions.
    below = above = False
    for x in x_values:
        if x == tt.x_use:
            continue
        for v, t in zip(values[x], t_grid):
            d = v - t
            if d < -tol * max(1.0, t):
                below = True
            elif d > tol * max(1.0, t):
                above = True

    if below and above:
        classification = "crossing"
    elif below:
        classification = "accelerating"
    elif above:
        classification = "decelerating"
    else:
        classification = "identity"

    crossing_time = None
    if classification == "crossing":
        for x in x_values:
            if x == tt.x_use:
                continue
            diffs = [v - t for v, t in zip(values[x], t_grid)]
            sign = [
                -1 if d < -tol * max(1.0, t) else (1 if d > tol * max(1.0, t) else 0)
                for d, t in zip(diffs, t_grid)
            ]
            # Bridge zero-band points so a -1 ... 0 ... +1 run still counts
            # as one sign change between its nonzero endpoints.
            last_t = last_s = None
            for t1, s1 in zip(t_grid, sign):
                if s1 == 0:
                    continue
                if last_s is not None and s1 * last_s == -1:
                    crossing_time = _bisect_sign_change(
                        lambda t: tt(t, x) - t, last_t, t1)
                    break
                last_t, last_s = t1, s1
            if crossing_time is not None:
                break

    return AxiomReport(
        zero_at_origin=zero_at_origin,
        nonnegative=nonnegative,
        strictly_increasing=strictly_increasing,
        identity_at_use=identity_at_use,
        classification=classification,
        crossing_time=crossing_time,
        failures=failures,
    )
