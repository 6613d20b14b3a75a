"""Semicircle (Sato-Tate) measure, its self-difference, and empirical checks.

The measure of normalized eigenvalues is (1/2pi) sqrt(4 - t^2) dt on [-2, 2];
intervals are always clamped to their ambient range ([-2, 2] for single
eigenvalues, [-4, 4] for differences).  The difference measure nu is the
pushforward of the product measure under (x, y) -> x - y, computed by a 1-D
convolution quadrature; a two-dimensional Riemann-sum sandwich lives in the
test suite as the independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DataError, QuadratureError, ValidationError
from .lfunctions import LFunctionData
from .primes import sieve


def _clamp(lo: float, hi: float, ambient: float) -> tuple[float, float]:
    if lo > hi:
        raise ValidationError(f"interval [{lo}, {hi}] has lo > hi")
    return max(lo, -ambient), min(hi, ambient)


def semicircle_pdf(t):
    t = np.asarray(t, dtype=np.float64)
    return np.sqrt(np.maximum(4.0 - t * t, 0.0)) / (2.0 * math.pi)


def mu_st(lo: float, hi: float) -> float:
    """Semicircle mass of [lo, hi] (clamped to [-2, 2]), in closed form."""
    lo, hi = _clamp(lo, hi, 2.0)
    if hi <= lo:
        return 0.0

    def antiderivative(t: float) -> float:
        return (t * math.sqrt(4.0 - t * t) / 2.0 + 2.0 * math.asin(t / 2.0)) / (2.0 * math.pi)

    return antiderivative(hi) - antiderivative(lo)


def mu_st_quantile(mass: float) -> float:
    """Point a with semicircle mass of [-2, a] equal to ``mass``."""
    if not 0.0 <= mass <= 1.0:
        raise ValidationError("mass must lie in [0, 1]")
    if mass == 0.0:
        return -2.0
    if mass == 1.0:
        return 2.0
    return float(brentq(lambda a: mu_st(-2.0, a) - mass, -2.0, 2.0, xtol=1e-14))


def quartile_edges() -> list[float]:
    """Edges of the four equal-mass semicircle boxes."""
    return [-2.0, mu_st_quantile(0.25), 0.0, mu_st_quantile(0.75), 2.0]


def nu(lo: float, hi: float, tol: float = 1e-8) -> float:
    """Difference-measure mass of [lo, hi] within [-4, 4].

    nu([lo, hi]) = integral of pdf(x) * mu_st([x - hi, x - lo]) dx, by Fubini
    over {(x, y): x - y in [lo, hi]}.
    """
    lo, hi = _clamp(lo, hi, 4.0)
    if hi <= lo:
        return 0.0

    def integrand(x: float) -> float:
        return float(semicircle_pdf(x)) * mu_st(x - hi, x - lo)

    # kinks where the inner interval's endpoints cross +-2
    points = sorted(
        {p for p in (lo - 2.0, lo + 2.0, hi - 2.0, hi + 2.0) if -2.0 < p < 2.0}
    )
    value, err = quad(integrand, -2.0, 2.0, points=points or None, epsabs=tol / 4, limit=300)
    if err > tol:
        raise QuadratureError(f"difference-measure quadrature reached only {err:.2e} > {tol:.2e}")
    return float(value)


def empirical_joint(
    f1: LFunctionData,
    f2: LFunctionData,
    x_max: float,
    interval1: tuple[float, float],
    interval2: tuple[float, float],
) -> float:
    """Fraction of primes p <= x_max with both eigenvalues in their boxes."""
    if x_max < 2:
        raise ValidationError("no primes below 2")
    primes = sieve(int(x_max))
    lam1 = np.array([f1.lambda_p(int(p)) for p in primes])
    lam2 = np.array([f2.lambda_p(int(p)) for p in primes])
    lo1, hi1 = _clamp(*interval1, 2.0)
    lo2, hi2 = _clamp(*interval2, 2.0)
    hits = (lam1 >= lo1) & (lam1 <= hi1) & (lam2 >= lo2) & (lam2 <= hi2)
    return float(np.count_nonzero(hits)) / len(primes)


def empirical_difference(
    f1: LFunctionData, f2: LFunctionData, x_max: float, interval: tuple[float, float]
) -> float:
    """Fraction of primes p <= x_max with lambda_1(p) - lambda_2(p) in the interval."""
    if x_max < 2:
        raise ValidationError("no primes below 2")
    primes = sieve(int(x_max))
    diff = np.array([f1.lambda_p(int(p)) - f2.lambda_p(int(p)) for p in primes])
    lo, hi = _clamp(*interval, 4.0)
    return float(np.count_nonzero((diff >= lo) & (diff <= hi))) / len(primes)


_E_TO_E = math.exp(math.e)


def effective_bound(
    k1: int, k2: int, q1: int, q2: int, x: float, c: float = 1.0
) -> float:
    """Quantitative joint-equidistribution error at scale x.

    c * loglog(k1 k2 q1 q2 log x) / sqrt(loglog x); the absolute constant is
    not pinned down by theory, so it stays an explicit parameter.
    """
    if c <= 0:
        raise ValidationError("constant must be positive")
    if x < _E_TO_E:
        raise ValidationError("need x >= e^e for iterated logarithms")
    return c * math.log(math.log(k1 * k2 * q1 * q2 * math.log(x))) / math.sqrt(
        math.log(math.log(x))
    )


def epsilon_window(x: float) -> float:
    """Shrinking prime-window width (logloglog x)^(1/4) / (loglog x)^(1/8)."""
    if x < _E_TO_E:
        raise ValidationError("need x >= e^e for iterated logarithms")
    return _epsilon_from_loglog(math.log(math.log(x)))


def _epsilon_from_loglog(u: float) -> float:
    # split out so the eventual monotone decay (u > e^2) is testable at
    # scales where x itself overflows a float
    if u < 1.0:
        raise ValidationError("iterated logarithm out of range")
    return math.log(u) ** 0.25 / u**0.125


@dataclass(frozen=True)
class JointBoxReport:
    box1: tuple[float, float]
    box2: tuple[float, float]
    empirical: float
    product_mass: float

    @property
    def deviation(self) -> float:
        return abs(self.empirical - self.product_mass)


def quartile_box_census(f1: LFunctionData, f2: LFunctionData, x_max: float) -> list[JointBoxReport]:
    """Empirical vs product-measure mass over the 16 quartile boxes."""
    edges = quartile_edges()
    out = []
    for i in range(4):
        for j in range(4):
            b1 = (edges[i], edges[i + 1])
            b2 = (edges[j], edges[j + 1])
            out.append(
                JointBoxReport(
                    box1=b1,
                    box2=b2,
                    empirical=empirical_joint(f1, f2, x_max, b1, b2),
                    product_mass=mu_st(*b1) * mu_st(*b2),
                )
            )
    return out
