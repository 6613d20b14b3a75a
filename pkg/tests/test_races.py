import math
from fractions import Fraction

import numpy as np
import pytest

from zerodist.alpha import AlphaSpec, solve_alpha
from zerodist.catalog import delta_form, weight16_form
from zerodist.errors import DataError, ValidationError
from zerodist.lfunctions import LFunctionData
from zerodist.races import (
    finite_prime_bound,
    h_distribution,
    h_value,
    local_race,
    race_census,
    winner_criterion,
)
from zerodist.torus import FourierPoly


@pytest.fixture(scope="module")
def delta():
    return delta_form(1000)


@pytest.fixture(scope="module")
def w16():
    return weight16_form(1000)


@pytest.fixture(scope="module")
def alpha_log2():
    return solve_alpha([[1]], [(1, 1)], [2], c_alpha=0.01)


def test_h_value_self_race_is_zero(delta, alpha_log2):
    h = FourierPoly.one_plus_cosine()
    assert h_value(delta, delta, h, alpha_log2) == 0.0


def test_h_value_constant_h_is_zero(delta, w16, alpha_log2):
    assert h_value(delta, w16, FourierPoly.constant(1, 1.0), alpha_log2) == 0.0


def test_h_value_cosine_closed_form(delta, w16, alpha_log2):
    got = h_value(delta, w16, FourierPoly.cosine(1), alpha_log2)
    expected = -(1 / math.pi) * (delta.von_mangoldt(2, 1) - w16.von_mangoldt(2, 1)) / math.sqrt(2)
    assert abs(got - expected) < 1e-12
    assert abs(got - 0.2688996377) < 1e-9  # frozen from the coefficient oracle


def test_h_value_antisymmetry(delta, w16, alpha_log2):
    h = FourierPoly.one_plus_cosine()
    assert abs(h_value(delta, w16, h, alpha_log2) + h_value(w16, delta, h, alpha_log2)) < 1e-12


def test_winner_criterion_known_margin():
    # eigenvalue gap 1 with h = 1 + cos: lhs = 0.5 vs rhs ~ 0.442 at p = 101
    f1 = LFunctionData("synthetic.a", 1, 12, Fraction(0), {1: 1.0, 101: 0.0})
    f2 = LFunctionData("synthetic.b", 1, 12, Fraction(0), {1: 1.0, 101: 1.0})
    res = winner_criterion(f1, f2, FourierPoly.one_plus_cosine(), 101)
    assert res.holds
    assert abs(res.lhs - 0.5) < 1e-15
    assert abs(res.rhs - 0.4419950) < 1e-7


def test_winner_criterion_equal_forms_never_hold(delta):
    res = winner_criterion(delta, delta, FourierPoly.one_plus_cosine(), 13)
    assert not res.holds
    assert res.lhs == 0.0
    assert res.rhs > 0.0


def test_winner_criterion_rejects_signed_h(delta, w16):
    with pytest.raises(ValidationError, match="nonnegative"):
        winner_criterion(delta, w16, FourierPoly.cosine(1), 7)


def test_winner_criterion_large_p_limit():
    # gap 1, k_h > 0: the threshold decays to zero, so the race is won
    f1 = LFunctionData("synthetic.a", 1, 12, Fraction(0), {1: 1.0, 99991: 0.0})
    f2 = LFunctionData("synthetic.b", 1, 12, Fraction(0), {1: 1.0, 99991: 1.0})
    assert winner_criterion(f1, f2, FourierPoly.one_plus_cosine(), 99991).holds


def test_never_both_directions(delta, w16):
    h = FourierPoly.one_plus_cosine()
    for p in (2, 3, 5, 7, 11, 97, 499):
        a = winner_criterion(delta, w16, h, p)
        b = winner_criterion(w16, delta, h, p)
        assert not (a.holds and b.holds)


def test_census_small_scan_all_undecided(delta, w16):
    # by hand: at p in {2,3,5,7} the threshold exceeds 2 k_h >= |lhs|
    report = race_census(delta, w16, FourierPoly.one_plus_cosine(), 10)
    assert list(report.primes) == [2, 3, 5, 7]
    assert report.undecided_fraction == 1.0
    assert report.f1_fraction == 0.0


def test_census_self_race(delta):
    report = race_census(delta, delta, FourierPoly.one_plus_cosine(), 100)
    assert report.f1_fraction == 0.0
    assert report.f2_fraction == 0.0
    assert report.undecided_fraction == 1.0


def test_census_fractions_sum_to_one(delta, w16):
    report = race_census(delta, w16, FourierPoly.one_plus_cosine(), 1000)
    total = report.f1_fraction + report.f2_fraction + report.undecided_fraction
    assert total == 1.0


def test_census_coverage_error(delta, w16):
    with pytest.raises(DataError, match="coverage"):
        race_census(delta, w16, FourierPoly.one_plus_cosine(), 10**4)


def test_finite_prime_bound_empty():
    # log ratio 4: even p = 2 gives only ~3.35, so no prime qualifies
    q2 = 10
    q1 = int(round(q2 * math.exp(4.0)))
    assert finite_prime_bound(q1, q2) == 1


def test_finite_prime_bound_ratio_two():
    # frozen by a direct scan of the inequality over primes
    bound = finite_prime_bound(2, 1)

    def rhs(p):
        return 2 * math.log(p) / math.sqrt(p) * (1 + 1 / (math.sqrt(p) - 1))

    assert bound == 307
    assert rhs(307) >= math.log(2.0) > rhs(311)


def test_finite_prime_bound_monotone_in_ratio():
    q2 = 1
    bounds = [finite_prime_bound(q1, q2) for q1 in (2, 3, 5, 9, 20, 100)]
    assert all(b >= a for a, b in zip(bounds[1:], bounds))


def test_finite_prime_bound_guard():
    with pytest.raises(ValidationError):
        finite_prime_bound(4, 4)


def test_local_race_self_is_zero(delta, alpha_log2):
    res = local_race(delta, delta, alpha_log2, 0.3)
    assert res.margin == 0.0
    assert not res.holds


def test_local_race_r0_levels_decide():
    f1 = LFunctionData("synthetic.q4", 4, 2, Fraction(0), {1: 1.0, 3: 0.1})
    f2 = LFunctionData("synthetic.q1", 1, 12, Fraction(0), {1: 1.0, 3: 0.2})
    spec = AlphaSpec.unrelated([0.2183])
    res = local_race(f1, f2, spec, 0.6)
    assert res.holds
    assert abs(res.margin - math.log(4.0) / (2 * math.pi)) < 1e-15


def test_local_race_delta_vs_w16_frozen(delta, w16, alpha_log2):
    # density difference at t0 = 0, equal levels: margin = g1(0) - g2(0)
    from zerodist.density import DensityModel

    res = local_race(delta, w16, alpha_log2, 0.0)
    g1 = DensityModel(delta, alpha_log2).eval([0.0], tol=1e-10).value
    g2 = DensityModel(w16, alpha_log2).eval([0.0], tol=1e-10).value
    assert abs(res.margin - (g1 - g2)) < 1e-12
    assert res.holds == (res.margin > 0)


def test_local_race_quarter_point_alternative(delta, w16, alpha_log2):
    res = local_race(delta, w16, alpha_log2, 0.25)
    assert res.alternative is not None
    lhs = delta.lambda_p(2) ** 2 - w16.lambda_p(2) ** 2
    assert abs(res.alternative.lhs - lhs) < 1e-14
    res2 = local_race(delta, w16, alpha_log2, 0.5)
    assert res2.alternative is None


def test_h_distribution_positive_half(delta, w16):
    f1 = delta_form(10**4)
    f2 = weight16_form(10**4)
    h = FourierPoly.one_plus_cosine()
    res = h_distribution(f1, f2, h, 10**4, (0.0, 100.0))
    assert res.n_primes > 100
    assert abs(res.nu_mass - 0.5) < 1e-8  # interval clamps to (0, 4]
    assert abs(res.fraction - 0.5) < 0.06


def test_h_distribution_total_mass(delta, w16):
    f1 = delta_form(10**4)
    f2 = weight16_form(10**4)
    h = FourierPoly.one_plus_cosine()
    res = h_distribution(f1, f2, h, 10**4, (-1000.0, 1000.0))
    assert res.fraction == 1.0
    assert abs(res.nu_mass - 1.0) < 1e-8


def test_h_distribution_self_race_all_mass_at_zero(delta):
    f = delta_form(10**4)
    h = FourierPoly.one_plus_cosine()
    res = h_distribution(f, f, h, 10**4, (-1e-12, 1e-12))
    assert res.fraction == 1.0


def test_h_distribution_needs_cosine_weight(delta, w16):
    with pytest.raises(ValidationError, match="cosine"):
        h_distribution(delta, w16, FourierPoly.constant(1, 1.0), 10**4, (0.0, 1.0))
