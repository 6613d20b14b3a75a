import math

import numpy as np
import pytest
from scipy.integrate import quad

from zerodist.catalog import delta_form, weight16_form
from zerodist.errors import ValidationError
from zerodist.satotate import (
    _epsilon_from_loglog,
    effective_bound,
    empirical_difference,
    empirical_joint,
    epsilon_window,
    mu_st,
    mu_st_quantile,
    nu,
    quartile_box_census,
    quartile_edges,
    semicircle_pdf,
)

from oracles import nu_rectangle_sandwich


def test_mu_st_full_mass():
    assert abs(mu_st(-2, 2) - 1.0) < 1e-15


def test_mu_st_half_by_symmetry():
    assert abs(mu_st(0, 2) - 0.5) < 1e-15


def test_mu_st_unit_interval_closed_form():
    expected = 1.0 / 3.0 + math.sqrt(3.0) / (2.0 * math.pi)
    assert abs(mu_st(-1, 1) - expected) < 1e-15
    assert abs(mu_st(-1, 1) - 0.608998) < 1e-6


def test_mu_st_clamps_ambient():
    assert mu_st(-5, 5) == mu_st(-2, 2)
    assert mu_st(1.5, 9.0) == mu_st(1.5, 2.0)


def test_mu_st_against_adaptive_quadrature():
    rng = np.random.default_rng(17)
    for _ in range(100):
        lo, hi = np.sort(rng.uniform(-2.2, 2.2, size=2))
        clo, chi = max(lo, -2.0), min(hi, 2.0)
        ref = 0.0
        if chi > clo:
            ref, _ = quad(semicircle_pdf, clo, chi, epsabs=1e-12)
        assert abs(mu_st(lo, hi) - ref) <= 1e-10


def test_mu_st_additivity():
    rng = np.random.default_rng(23)
    for _ in range(50):
        a, b, c = np.sort(rng.uniform(-2, 2, size=3))
        assert abs(mu_st(a, b) + mu_st(b, c) - mu_st(a, c)) < 1e-12


def test_quartiles():
    edges = quartile_edges()
    assert edges[2] == 0.0
    assert abs(mu_st(edges[0], edges[1]) - 0.25) < 1e-12
    assert abs(mu_st(edges[1], edges[2]) - 0.25) < 1e-12
    assert abs(edges[1] + edges[3]) < 1e-12  # symmetric quartiles
    assert abs(mu_st_quantile(0.5)) < 1e-12


def test_nu_full_mass():
    assert abs(nu(-4, 4) - 1.0) < 1e-8


def test_nu_half_mass_by_exchange_symmetry():
    assert abs(nu(0, 4) - 0.5) < 1e-8


def test_nu_symmetry():
    for c, d in ((0.3, 1.1), (1.5, 3.0), (0.0, 0.25)):
        assert abs(nu(-d, -c) - nu(c, d)) < 1e-8


def test_nu_monotone_in_inclusion():
    values = [nu(-w, w) for w in (0.25, 0.5, 1.0, 2.0, 3.0, 4.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_nu_against_rectangle_sandwich():
    rng = np.random.default_rng(31)
    intervals = [tuple(np.sort(rng.uniform(-4, 4, size=2))) for _ in range(20)]
    for lo, hi in intervals:
        inner, outer = nu_rectangle_sandwich(lo, hi, strips=400)
        val = nu(lo, hi)
        assert inner - 1e-12 <= val <= outer + 1e-12
        assert abs(val - 0.5 * (inner + outer)) <= 1e-3


def test_nu_unit_interval_frozen_by_sandwich():
    # midpoint of the 400-strip sandwich, frozen at test-writing time
    inner, outer = nu_rectangle_sandwich(-1.0, 1.0, strips=400)
    assert abs(0.5 * (inner + outer) - nu(-1, 1)) < 1e-3
    assert abs(nu(-1, 1) - 0.4966298928) < 1e-6


def test_effective_bound_value():
    got = effective_bound(1, 1, 4, 4, math.exp(math.exp(4.0)))
    expected = math.log(math.log(16.0 * math.exp(4.0))) / 2.0
    assert abs(got - expected) < 1e-12
    assert abs(got - 0.9565) < 1e-4


def test_effective_bound_guards():
    with pytest.raises(ValidationError):
        effective_bound(1, 1, 1, 1, 10.0)
    with pytest.raises(ValidationError):
        effective_bound(1, 1, 1, 1, 1e6, c=0.0)


def test_epsilon_window_value():
    got = _epsilon_from_loglog(16.0)
    assert abs(got - math.log(16.0) ** 0.25 / 16.0**0.125) < 1e-15
    assert abs(got - 0.9124443058) < 1e-9  # (log 16)^(1/4) / 16^(1/8)
    assert abs(epsilon_window(math.exp(math.exp(4.0))) - _epsilon_from_loglog(4.0)) < 1e-15


def test_epsilon_window_eventually_decreasing():
    us = np.exp(np.linspace(math.log(16.0), math.log(5000.0), 60))
    values = [_epsilon_from_loglog(float(u)) for u in us]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_empirical_joint_full_box_is_one():
    f1 = delta_form(2000)
    f2 = weight16_form(2000)
    assert empirical_joint(f1, f2, 2000, (-2, 2), (-2, 2)) == 1.0


def test_empirical_joint_guards():
    f1 = delta_form(100)
    with pytest.raises(ValidationError):
        empirical_joint(f1, f1, 1.5, (-2, 2), (-2, 2))


def test_empirical_quartile_boxes_desk_scale():
    # 1e4 is a smoke check; the 1e6 run is the slow acceptance-adjacent test
    f1 = delta_form(10**4)
    f2 = weight16_form(10**4)
    for report in quartile_box_census(f1, f2, 10**4):
        assert report.deviation <= 0.08


@pytest.mark.slow
def test_empirical_quartile_boxes_large_scale():
    f1 = delta_form(10**6)
    f2 = weight16_form(10**6)
    for report in quartile_box_census(f1, f2, 10**6):
        assert report.deviation <= 0.05


def test_empirical_difference_matches_nu_loosely():
    f1 = delta_form(10**4)
    f2 = weight16_form(10**4)
    frac = empirical_difference(f1, f2, 10**4, (0.0, 4.0))
    assert abs(frac - 0.5) < 0.05
