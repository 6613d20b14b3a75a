"""Empirical statistics over zero ordinates.

All sums run over both signs of the ordinates (the data stores the positive
half; the mirror is synthesized, which is exact for self-dual forms).  Heavy
reductions are single numpy sums, whose pairwise accumulation keeps results
deterministic and chunking-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alpha import AlphaSpec
from .density import DensityModel
from .errors import BudgetError, ValidationError
from .lfunctions import LFunctionData, check_height, require_zeros
from .primes import prime_power_split
from .torus import FourierPoly

_TWO_PI_E = 2.0 * math.pi * math.e
_BOX_BUDGET = 4_000_000


def rvm_main(level: int, t: float) -> float:
    """Smooth zero-count main term (T/pi) log(q (T/(2 pi e))^2)."""
    if t <= 0:
        raise ValidationError("height must be positive")
    return t / math.pi * math.log(level * (t / _TWO_PI_E) ** 2)


def count_zeros(form: LFunctionData, t: float) -> int:
    """Number of zeros with |ordinate| <= t (both signs)."""
    t = check_height(form, t)
    return 2 * int(np.searchsorted(form.zeros, t, side="right"))


@dataclass(frozen=True)
class ZeroCountReport:
    t: float
    n_emp: int
    n_main: float

    @property
    def error(self) -> float:
        return self.n_emp - self.n_main


@dataclass(frozen=True)
class ZeroCountScan:
    reports: tuple[ZeroCountReport, ...]
    c_fit: float  # smallest C with |error| <= C log(T + 3) over the scan


def zero_count_scan(form: LFunctionData, points: int = 200, t_min: float | None = None) -> ZeroCountScan:
    zeros = require_zeros(form)
    lo = t_min if t_min is not None else float(zeros[0]) + 1.0
    if lo >= form.t_max:
        raise ValidationError("scan range is empty")
    ts = np.exp(np.linspace(math.log(lo), math.log(form.t_max), points))
    reports = []
    c_fit = 0.0
    for t in ts:
        rep = ZeroCountReport(float(t), count_zeros(form, float(t)), rvm_main(form.level, float(t)))
        c_fit = max(c_fit, abs(rep.error) / math.log(rep.t + 3.0))
        reports.append(rep)
    return ZeroCountScan(tuple(reports), c_fit)


def fractional_parts(form: LFunctionData, spec: AlphaSpec, t: float) -> np.ndarray:
    """Points {gamma alpha} in the unit cube for all |gamma| <= t.

    Each positive ordinate contributes its own point and the mirror point of
    -gamma, in that order (positives first, then mirrors).
    """
    t = check_height(form, t)
    gammas = form.zeros[form.zeros <= t]
    pos = np.mod(np.outer(gammas, spec.alpha), 1.0)
    neg = np.mod(-np.outer(gammas, spec.alpha), 1.0)
    return np.concatenate([pos, neg], axis=0)


@dataclass(frozen=True)
class GridHistogram:
    n: int
    cells_per_axis: int
    counts: np.ndarray
    t: float
    total: int


def grid_histogram(points, cells_per_axis: int, t: float = math.nan) -> GridHistogram:
    """Half-open binning of unit-cube points into a G^n integer grid."""
    if cells_per_axis < 1:
        raise ValidationError("need at least one cell per axis")
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        pts = pts.reshape(-1, 1)
    g = cells_per_axis
    n = pts.shape[1]
    idx = np.floor(pts * g).astype(np.int64) % g  # 1.0 wraps to cell 0
    counts = np.zeros((g,) * n, dtype=np.int64)
    np.add.at(counts, tuple(idx.T), 1)
    counts.flags.writeable = False
    return GridHistogram(n=n, cells_per_axis=g, counts=counts, t=t, total=pts.shape[0])


def predicted_cell_counts(
    model: DensityModel, n_total: float, t: float, cells_per_axis: int, tol: float = 1e-12
) -> np.ndarray:
    """Per-cell prediction: volume * N(T) + T * (density integral over the cell)."""
    g = cells_per_axis
    n = model.spec.n
    out = np.full((g,) * n, float(n_total) / g**n)
    out += t * _cell_integrals(model, g, tol)
    return out


def _cell_integrals(model: DensityModel, g: int, tol: float = 1e-12) -> np.ndarray:
    """Closed-form density integral over every grid cell, as a G^n array."""
    n = model.spec.n
    total = np.zeros((g,) * n)
    if model.spec.r == 0:
        return total
    edges = np.arange(g + 1) / g
    levels = model._levels_for(tol)
    for j in range(model.spec.r):
        _, q = model.spec.rationals[j]
        b = model.spec.matrix[j]
        amp = model.amplitudes(j, levels)
        for l in range(1, levels + 1):
            factors = []
            for k in range(n):
                c = q * l * int(b[k])
                if c == 0:
                    factors.append(np.full(g, 1.0 / g, dtype=complex))
                else:
                    w = 2.0 * math.pi * c
                    ex = np.exp(-1j * w * edges)
                    factors.append((ex[1:] - ex[:-1]) / (-1j * w))
            prod = factors[0]
            for f in factors[1:]:
                prod = np.multiply.outer(prod, f)
            total -= (2.0 / math.pi) * amp[l - 1] * prod.real
    return total


@dataclass(frozen=True)
class WeightedSumResult:
    value: float  # sum of h over the fractional-parts points
    n_emp: int
    pairing: float  # integral of h against the density
    residual: float  # (value - N(T) int(h) - T pairing) / T


def weighted_sum(
    form: LFunctionData, spec: AlphaSpec, h: FourierPoly, t: float
) -> WeightedSumResult:
    points = fractional_parts(form, spec, t)
    value = float(np.sum(h.eval_many(points)))
    n_emp = points.shape[0]
    pairing = DensityModel(form, spec).pair_with_h(h)
    residual = (value - n_emp * h.integral() - t * pairing) / t
    return WeightedSumResult(value=value, n_emp=n_emp, pairing=pairing, residual=residual)


@dataclass(frozen=True)
class LandauSum:
    x: float
    t: float
    value: complex  # sum of x^{i gamma} over |gamma| <= T
    prediction: float | None  # -(T/pi) Lam(x)/sqrt(x) at integer x

    @property
    def normalized(self) -> float:
        return self.value.real / self.t


def landau_sum(form: LFunctionData, x: float, t: float) -> LandauSum:
    """Exponential sum over ordinates, which spikes at prime powers.

    The mirror ordinates make the sum real: value = 2 sum cos(gamma log x).
    The numpy reduction is pairwise, so the result does not depend on any
    chunked evaluation order.
    """
    if x <= 1.0:
        raise ValidationError("need x > 1")
    t = check_height(form, t)
    gammas = form.zeros[form.zeros <= t]
    value = complex(2.0 * float(np.sum(np.cos(gammas * math.log(x)))))
    prediction = None
    if abs(x - round(x)) < 1e-12 and round(x) >= 2:
        lam = form.von_mangoldt_at(int(round(x)))
        prediction = -(t / math.pi) * lam / math.sqrt(x)
    return LandauSum(x=float(x), t=t, value=value, prediction=prediction)


def _axis_pairs(g: int) -> tuple[np.ndarray, np.ndarray]:
    a, b = np.triu_indices(g + 1, k=1)
    return a, b


def _all_box_values(table: np.ndarray) -> np.ndarray:
    """Map a prefix-summable G^n cell table to values over all aligned boxes.

    Axis by axis, replaces the cell dimension with the G(G+1)/2 dimension of
    half-open index intervals [a, b); entry order matches _axis_pairs.
    """
    g = table.shape[0]
    a, b = _axis_pairs(g)
    out = table
    for axis in range(table.ndim):
        out = np.moveaxis(out, axis, -1)
        prefix = np.concatenate(
            [np.zeros(out.shape[:-1] + (1,)), np.cumsum(out, axis=-1)], axis=-1
        )
        out = prefix[..., b] - prefix[..., a]
        out = np.moveaxis(out, -1, axis)
    return out


@dataclass(frozen=True)
class DiscrepancyResult:
    value: float
    box: tuple[tuple[float, float], ...]  # the extremal grid-aligned box
    cells_per_axis: int
    n_points: int


def discrepancy(form: LFunctionData, spec: AlphaSpec, t: float, cells_per_axis: int) -> DiscrepancyResult:
    """Sup over grid-aligned boxes of |empirical fraction - volume|.

    Uses prefix sums, so the cost is the number of boxes (G(G+1)/2 per axis)
    rather than points-per-box; refuses beyond 4e6 boxes.
    """
    points = fractional_parts(form, spec, t)
    return points_discrepancy(points, cells_per_axis)


def points_discrepancy(points, cells_per_axis: int) -> DiscrepancyResult:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        pts = pts.reshape(-1, 1)
    n = pts.shape[1]
    g = cells_per_axis
    n_boxes = (g * (g + 1) // 2) ** n
    if n > 3 or n_boxes > _BOX_BUDGET:
        raise BudgetError(
            f"{n_boxes:.2e} grid boxes exceed the {_BOX_BUDGET:.0e} budget (n <= 3 and "
            "smaller G required)"
        )
    hist = grid_histogram(pts, g)
    box_counts = _all_box_values(hist.counts.astype(np.float64)) / pts.shape[0]
    a, b = _axis_pairs(g)
    side = (b - a) / g
    vol = side
    for _ in range(n - 1):
        vol = np.multiply.outer(vol, side)
    dev = np.abs(box_counts - vol)
    flat = int(np.argmax(dev))
    idx = np.unravel_index(flat, dev.shape)
    box = tuple((a[i] / g, b[i] / g) for i in idx)
    return DiscrepancyResult(
        value=float(dev[idx]), box=box, cells_per_axis=g, n_points=pts.shape[0]
    )


def max_grid_box_density_integral(
    model: DensityModel, cells_per_axis: int, tol: float = 1e-12
) -> tuple[float, tuple[tuple[float, float], ...]]:
    """max over grid-aligned boxes of |closed-form density integral|."""
    g = cells_per_axis
    n = model.spec.n
    n_boxes = (g * (g + 1) // 2) ** n
    if n > 3 or n_boxes > _BOX_BUDGET:
        raise BudgetError("grid box budget exceeded")
    cell = _cell_integrals(model, g, tol)
    values = _all_box_values(cell)
    a, b = _axis_pairs(g)
    flat = int(np.argmax(np.abs(values)))
    idx = np.unravel_index(flat, values.shape)
    box = tuple((a[i] / g, b[i] / g) for i in idx)
    return float(values[idx]), box


def zero_density_count(form: LFunctionData, sigma: float, t: float) -> int:
    """Zeros with real part >= sigma, |ordinate| <= t, on critical-line data.

    The stored ordinates all carry real part 1/2, so the count is all-or-
    nothing; the theoretical envelope is in zero_density_envelope.
    """
    if sigma > 0.5:
        return 0
    return count_zeros(form, t)


def zero_density_envelope(sigma: float, t: float, c: float = 25.0 / 128.0) -> float:
    """Envelope T^(1 - c (sigma - 1/2)) log T for comparison plots."""
    if t < 2:
        raise ValidationError("need T >= 2")
    return t ** (1.0 - c * (sigma - 0.5)) * math.log(t)
