import math

import numpy as np
import pytest

from zerodist.alpha import AlphaSpec, solve_alpha
from zerodist.catalog import delta_form
from zerodist.density import DensityModel, first_mode_envelope
from zerodist.torus import FourierPoly, smoothed_box

from oracles import box_quadrature_1d

LOG2 = math.log(2.0)


@pytest.fixture(scope="module")
def delta():
    return delta_form(200)


@pytest.fixture(scope="module")
def alpha_log2():
    return solve_alpha([[1]], [(1, 1)], [2], c_alpha=0.01)


@pytest.fixture(scope="module")
def alpha_section7():
    return solve_alpha([[1, 1], [1, 2]], [(1, 1), (1, 1)], [2, 3], c_alpha=0.01)


def direct_series_value(form, primes_a_q, t, levels=80):
    """Independent oracle: term-by-term direct summation, no closed forms."""
    total = 0.0
    for p, a, q, b in primes_a_q:
        for l in range(1, levels + 1):
            lam = form.von_mangoldt(p, a * l) / p ** (a * l / 2)
            phase = sum(2 * math.pi * q * l * bk * tk for bk, tk in zip(b, t))
            total -= (2 / math.pi) * lam * math.cos(phase)
    return total


def test_zero_certificate_is_identically_zero(delta):
    spec = AlphaSpec.unrelated([0.123456])
    model = DensityModel(delta, spec)
    out = model.eval([0.3], tol=1e-10)
    assert out.value == 0.0
    assert out.tail == 0.0
    assert model.integrate_box([(0.1, 0.7)]) == 0.0


def test_eval_against_direct_series_1d(delta, alpha_log2):
    model = DensityModel(delta, alpha_log2)
    for t in (0.0, 0.17, 0.5, 0.93):
        expected = direct_series_value(delta, [(2, 1, 1, (1,))], (t,))
        got = model.eval([t], tol=1e-10)
        assert abs(got.value - expected) < 1e-9
        assert got.tail <= 1e-10


def test_eval_against_direct_series_2d(delta, alpha_section7):
    model = DensityModel(delta, alpha_section7)
    rows = [(2, 1, 1, (1, 1)), (3, 1, 1, (1, 2))]
    for t in ((0.0, 0.0), (0.25, 0.5), (0.71, 0.13)):
        expected = direct_series_value(delta, rows, t)
        got = model.eval(list(t), tol=1e-10)
        assert abs(got.value - expected) < 1e-9


def test_eval_at_origin_is_sum_of_one_prime_series(delta, alpha_section7):
    model = DensityModel(delta, alpha_section7)
    per_prime = direct_series_value(delta, [(2, 1, 1, (1,))], (0.0,)) + direct_series_value(
        delta, [(3, 1, 1, (1,))], (0.0,)
    )
    assert abs(model.eval([0.0, 0.0], tol=1e-10).value - per_prime) < 1e-9


def test_tail_bound_monotone_and_within_spec_cap(delta, alpha_section7):
    model = DensityModel(delta, alpha_section7)
    previous = math.inf
    for levels in range(1, 30):
        bound = model.tail_bound(levels)
        assert bound < previous
        cap = sum(
            2 * math.log(p) * p ** (-0.5 * (levels + 1)) / (1 - p**-0.5) for p in (2, 3)
        )
        assert bound <= cap + 1e-15
        previous = bound


def test_truncation_consistency_across_tolerances(delta, alpha_section7):
    model = DensityModel(delta, alpha_section7)
    rng = np.random.default_rng(42)
    pts = rng.uniform(size=(1000, 2))
    coarse = model.eval_many(pts, tol=1e-6)
    fine = model.eval_many(pts, tol=1e-12)
    assert np.max(np.abs(coarse - fine)) <= 1.1e-6


def test_integrate_full_torus_is_zero(delta, alpha_section7):
    model = DensityModel(delta, alpha_section7)
    assert abs(model.integrate_box([(0.0, 1.0), (0.0, 1.0)])) < 1e-14


def test_integrate_degenerate_side_is_zero(delta, alpha_section7):
    model = DensityModel(delta, alpha_section7)
    assert model.integrate_box([(0.3, 0.3), (0.0, 1.0)]) == 0.0


def test_integrate_box_against_quadrature_1d(delta, alpha_log2):
    model = DensityModel(delta, alpha_log2)
    closed = model.integrate_box([(0.0, 0.5)], tol=1e-12)
    quad = box_quadrature_1d(lambda x: model.eval_many(x.reshape(-1, 1), tol=1e-12), 0.0, 0.5)
    assert abs(closed - quad) < 1e-8


def test_integrate_box_random_boxes_1d(delta, alpha_log2):
    model = DensityModel(delta, alpha_log2)
    rng = np.random.default_rng(7)
    for _ in range(20):
        lo, hi = np.sort(rng.uniform(size=2))
        closed = model.integrate_box([(lo, hi)], tol=1e-12)
        quad = box_quadrature_1d(
            lambda x: model.eval_many(x.reshape(-1, 1), tol=1e-12), lo, hi
        )
        assert abs(closed - quad) < 1e-6


def test_integrate_box_2d_tensor_quadrature(delta, alpha_section7):
    # factorized composite-Simpson oracle per mode; see test docstring in
    # test_acceptance for the rationale
    model = DensityModel(delta, alpha_section7)
    rng = np.random.default_rng(11)
    for _ in range(10):
        lo1, hi1 = np.sort(rng.uniform(size=2))
        lo2, hi2 = np.sort(rng.uniform(size=2))
        closed = model.integrate_box([(lo1, hi1), (lo2, hi2)], tol=1e-12)
        # direct 2-D Simpson on a 301x301 grid of density values
        from scipy.integrate import simpson

        x = np.linspace(lo1, hi1, 301)
        y = np.linspace(lo2, hi2, 301)
        grid = np.stack(np.meshgrid(x, y, indexing="ij"), axis=-1).reshape(-1, 2)
        values = model.eval_many(grid, tol=1e-12).reshape(301, 301)
        quad = simpson([simpson(row, x=y) for row in values], x=x)
        assert abs(closed - quad) < 2e-5


def test_pair_with_constant_is_zero(delta, alpha_log2):
    model = DensityModel(delta, alpha_log2)
    assert model.pair_with_h(FourierPoly.constant(1, 1.0)) == 0.0


def test_pair_with_cosine_closed_form(delta, alpha_log2):
    model = DensityModel(delta, alpha_log2)
    got = model.pair_with_h(FourierPoly.cosine(1))
    expected = -(1 / math.pi) * delta.von_mangoldt(2, 1) / math.sqrt(2.0)
    assert abs(got - expected) < 1e-15
    assert abs(got - 0.0827379) < 1e-6  # frozen desk value


def test_pair_with_cosine_matches_grid_quadrature(delta, alpha_log2):
    model = DensityModel(delta, alpha_log2)
    h = FourierPoly.cosine(1)
    grid = (np.arange(8192) / 8192).reshape(-1, 1)
    quad = float(np.mean(h.eval_many(grid) * model.eval_many(grid, tol=1e-13)))
    assert abs(model.pair_with_h(h) - quad) < 1e-10


def test_pair_linearity(delta, alpha_log2):
    model = DensityModel(delta, alpha_log2)
    h1, _ = smoothed_box([(0.1, 0.6)], eps=0.04)
    h2 = FourierPoly.one_plus_cosine()
    lhs = model.pair_with_h(h1 + h2)
    rhs = model.pair_with_h(h1) + model.pair_with_h(h2)
    assert abs(lhs - rhs) < 1e-12


def test_pair_r0_is_zero(delta):
    model = DensityModel(delta, AlphaSpec.unrelated([0.3]))
    assert model.pair_with_h(FourierPoly.one_plus_cosine()) == 0.0


def test_first_mode_envelope_lemma(delta):
    # sup-grid deviation of g from its leading cosine term obeys the
    # closed-form envelope for each small prime
    grid = (np.arange(1000) / 1000).reshape(-1, 1)
    for p in (2, 3, 5):
        spec = solve_alpha([[1]], [(1, 1)], [p], c_alpha=0.01)
        model = DensityModel(delta, spec)
        lead = -(2 / math.pi) * delta.von_mangoldt(p, 1) / math.sqrt(p) * np.cos(
            2 * math.pi * grid[:, 0]
        )
        deviation = np.max(np.abs(model.eval_many(grid, tol=1e-12) - lead))
        assert deviation <= first_mode_envelope(delta, p)


def test_envelope_values():
    form = delta_form(20)
    assert abs(first_mode_envelope(form, 2) - 4 * LOG2 / (math.pi * 2 * (1 - 2**-0.5))) < 1e-15
