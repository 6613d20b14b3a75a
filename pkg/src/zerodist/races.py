"""Races between the zero statistics of two newforms.

Winners are decided through the sufficient inequality relating the
eigenvalue gap at p to the kernel weight of the test function: at
alpha = log(p)/(2 pi), the first form wins whenever

    (lambda_2(p) - lambda_1(p)) * k_h > 4 * integral(h) / (sqrt(p) (1 - p^{-1/2})),

where k_h is the cosine weight of h.  This is how the asymptotic results are
proved, and it needs only eigenvalue data, never the zeros of both forms.
Census scans over primes are vectorized and deterministic (ascending p).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .alpha import AlphaSpec, solve_alpha
from .density import DensityModel
from .errors import DataError, ValidationError
from .lfunctions import LFunctionData
from .primes import segmented_primes, sieve
from .satotate import epsilon_window, nu
from .torus import FourierPoly

_NONNEG_GRID = 1000


def _require_circle(h: FourierPoly) -> None:
    if h.n != 1:
        raise ValidationError("races use test functions on the circle (n = 1)")


def _require_race_test_function(h: FourierPoly) -> None:
    _require_circle(h)
    if not h.half_modes:
        raise ValidationError("test function is identically zero")
    if h.min_on_grid(_NONNEG_GRID) < -1e-10:
        raise ValidationError("test function must be nonnegative (grid check failed)")


def _lambda_table(form: LFunctionData, primes: np.ndarray) -> np.ndarray:
    try:
        return np.array([form.lam[int(p)] for p in primes])
    except KeyError as exc:
        raise DataError(
            f"{form.label}: coefficient coverage ends before p = {exc.args[0]}"
        ) from None


def h_value(
    f1: LFunctionData, f2: LFunctionData, h: FourierPoly, spec: AlphaSpec
) -> float:
    """Level-adjusted limit of the normalized zero-sum difference.

    Equals the pairing of h against the difference of the two density
    functions; the conductor term is already subtracted in the definition.
    """
    _require_circle(h)
    if spec.n != 1:
        raise ValidationError("the limit statistic is defined for scalar alpha")
    return DensityModel(f1, spec).pair_with_h(h) - DensityModel(f2, spec).pair_with_h(h)


@dataclass(frozen=True)
class CriterionResult:
    holds: bool
    lhs: float
    rhs: float


def winner_criterion(
    f1: LFunctionData, f2: LFunctionData, h: FourierPoly, p: int
) -> CriterionResult:
    """Sufficient condition for f1 to win the (log p / 2 pi, h)-race."""
    _require_race_test_function(h)
    lhs = (f2.lambda_p(p) - f1.lambda_p(p)) * h.cosine_weight()
    rhs = 4.0 * h.integral() / (math.sqrt(p) * (1.0 - p**-0.5))
    return CriterionResult(holds=lhs > rhs, lhs=lhs, rhs=rhs)


@dataclass(frozen=True)
class RaceReport:
    x_max: float
    primes: np.ndarray
    lhs_f1: np.ndarray  # criterion left side for f1 winning
    rhs: np.ndarray
    winner: np.ndarray  # +1 f1, -1 f2, 0 undecided
    h_descriptor: str
    alpha_descriptor: str = "log p / 2 pi"

    @property
    def f1_fraction(self) -> float:
        return float(np.count_nonzero(self.winner == 1)) / self.primes.size

    @property
    def f2_fraction(self) -> float:
        return float(np.count_nonzero(self.winner == -1)) / self.primes.size

    @property
    def undecided_fraction(self) -> float:
        return float(np.count_nonzero(self.winner == 0)) / self.primes.size


def race_census(
    f1: LFunctionData, f2: LFunctionData, h: FourierPoly, x_max: float
) -> RaceReport:
    """Decide the race criterion at every prime p <= x_max."""
    _require_race_test_function(h)
    if f1.level != f2.level:
        warnings.warn(
            "race census across distinct levels: the equal-conductor census "
            "statement does not apply",
            stacklevel=2,
        )
    primes = sieve(int(x_max))
    if primes.size == 0:
        raise ValidationError("no primes below the scan bound")
    lam1 = _lambda_table(f1, primes)
    lam2 = _lambda_table(f2, primes)
    k = h.cosine_weight()
    rhs = 4.0 * h.integral() / (np.sqrt(primes) * (1.0 - primes**-0.5))
    lhs1 = (lam2 - lam1) * k
    winner = np.where(lhs1 > rhs, 1, np.where(-lhs1 > rhs, -1, 0)).astype(np.int8)
    return RaceReport(
        x_max=float(x_max),
        primes=primes,
        lhs_f1=lhs1,
        rhs=rhs,
        winner=winner,
        h_descriptor=h.to_json(),
    )


def finite_prime_bound(q1: int, q2: int) -> int:
    """Largest prime where the lower-level form could still win.

    For q1 > q2, a win by the level-q2 form forces
    log(q1/q2) <= 2 p^{-1/2} (1 + (sqrt(p) - 1)^{-1}) log p, whose right side
    decays to zero; past the returned prime the inequality is impossible.
    Returns 1 when no prime at all satisfies it.
    """
    if q1 <= q2:
        raise ValidationError("need q1 > q2 >= 1")
    target = math.log(q1 / q2)

    def rhs(p: int) -> float:
        return 2.0 * math.log(p) / math.sqrt(p) * (1.0 + 1.0 / (math.sqrt(p) - 1.0))

    best = 1
    p = 2
    while True:
        if rhs(p) >= target:
            best = p
        # envelope 4 log p / sqrt(p) decreasing beyond p = 8 bounds the tail
        if p > 8 and 4.0 * math.log(p) / math.sqrt(p) < target:
            return best
        p += 1
        while not _is_prime_small(p):
            p += 1


def _is_prime_small(n: int) -> bool:
    if n < 4:
        return n >= 2
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class LocalRaceResult:
    holds: bool
    margin: float
    alternative: CriterionResult | None = None  # quarter-point variant


def local_race(
    f1: LFunctionData, f2: LFunctionData, spec: AlphaSpec, t0: float
) -> LocalRaceResult:
    """Compare density-plus-level weight at a single point of the circle.

    f1 wins locally at t0 when
    g_1(t0) + log(q1)/(2 pi) > g_2(t0) + log(q2)/(2 pi).  At the quarter
    points the leading cosine vanishes, so the second-order variant based on
    squared eigenvalues is evaluated as well (single-prime certificates with
    a = q = 1 only).
    """
    if spec.n != 1:
        raise ValidationError("local races are defined on the circle")
    tol = 1e-10
    g1 = DensityModel(f1, spec).eval([t0], tol=tol).value
    g2 = DensityModel(f2, spec).eval([t0], tol=tol).value
    margin = (g1 + math.log(f1.level) / (2 * math.pi)) - (
        g2 + math.log(f2.level) / (2 * math.pi)
    )
    alternative = None
    if (
        math.isclose(t0 % 1.0, 0.25) or math.isclose(t0 % 1.0, 0.75)
    ) and spec.r == 1 and spec.rationals[0] == (1, 1) and abs(spec.matrix[0][0]) == 1:
        p = spec.primes[0]
        lhs = f1.lambda_p(p) ** 2 - f2.lambda_p(p) ** 2
        rhs = (p / (2.0 * math.log(p))) * math.log(1.0 + f1.level**-0.5) + 4.0 / (
            p**1.5 * (1.0 - p**-0.5)
        )
        alternative = CriterionResult(holds=lhs > rhs, lhs=lhs, rhs=rhs)
    return LocalRaceResult(holds=margin > 0.0, margin=margin, alternative=alternative)


@dataclass(frozen=True)
class HDistributionResult:
    x_max: float
    window: tuple[float, float]
    n_primes: int
    scaled_values: np.ndarray  # sqrt(X)/log(X) * H at each window prime
    interval: tuple[float, float]
    fraction: float
    nu_mass: float


def h_distribution(
    f1: LFunctionData,
    f2: LFunctionData,
    h: FourierPoly,
    x_max: float,
    interval: tuple[float, float],
) -> HDistributionResult:
    """Distribution of the scaled limit statistic over a shrinking prime window.

    For p in [(1 - eps)X, X] the statistic's main term is
    (2 k_h / pi) log(p) (lambda_2(p) - lambda_1(p)) / sqrt(p); scaled by
    sqrt(X)/log(X) its distribution converges to the difference measure of
    the rescaled interval.  The empirical fraction is compared with
    nu((pi / 2 k_h) * interval).
    """
    _require_circle(h)
    k = h.cosine_weight()
    if k == 0.0:
        raise ValidationError("test function has vanishing cosine weight")
    eps = epsilon_window(x_max)
    lo_p = (1.0 - eps) * x_max
    primes = segmented_primes(lo_p, x_max)
    if primes.size == 0:
        raise DataError(f"no primes in the window [{lo_p:.1f}, {x_max:.1f}]")
    lam1 = _lambda_table(f1, primes)
    lam2 = _lambda_table(f2, primes)
    main = (2.0 * k / math.pi) * np.log(primes) * (lam2 - lam1) / np.sqrt(primes)
    scaled = math.sqrt(x_max) / math.log(x_max) * main
    lo, hi = float(interval[0]), float(interval[1])
    fraction = float(np.count_nonzero((scaled > lo) & (scaled <= hi))) / primes.size
    factor = math.pi / (2.0 * k)
    rescaled = sorted((factor * lo, factor * hi))
    return HDistributionResult(
        x_max=float(x_max),
        window=(float(lo_p), float(x_max)),
        n_primes=int(primes.size),
        scaled_values=scaled,
        interval=(lo, hi),
        fraction=fraction,
        nu_mass=nu(rescaled[0], rescaled[1]),
    )
