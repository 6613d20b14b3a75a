"""Built-in level-1 fixture forms constructed from exact q-expansions."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .lfunctions import LFunctionData
from .primes import sieve
from .qseries import tau_series, weight16_series

DELTA_LABEL = "1.12.a.a"
WEIGHT16_LABEL = "1.16.a.a"

_series_cache: dict[tuple[str, int], dict[int, float]] = {}


def _prime_lambdas(which: str, limit: int) -> dict[int, float]:
    key = (which, limit)
    if key not in _series_cache:
        if which == "tau":
            series, half = tau_series(limit), 5.5
        else:
            series, half = weight16_series(limit), 7.5
        lam = {1: 1.0}
        for p in sieve(limit):
            lam[int(p)] = series[int(p) - 1] / float(p) ** half
        _series_cache[key] = lam
    return dict(_series_cache[key])


def delta_form(coeff_limit: int = 1000, zeros=None) -> LFunctionData:
    """The weight-12 level-1 form, eigenvalues exact to coeff_limit."""
    return LFunctionData(
        label=DELTA_LABEL,
        level=1,
        weight=12,
        theta=Fraction(0),
        lam=_prime_lambdas("tau", coeff_limit),
        zeros=np.empty(0) if zeros is None else np.asarray(zeros, dtype=np.float64),
    )


def weight16_form(coeff_limit: int = 1000, zeros=None) -> LFunctionData:
    """The weight-16 level-1 eigenform (discriminant times Eisenstein E4)."""
    return LFunctionData(
        label=WEIGHT16_LABEL,
        level=1,
        weight=16,
        theta=Fraction(0),
        lam=_prime_lambdas("w16", coeff_limit),
        zeros=np.empty(0) if zeros is None else np.asarray(zeros, dtype=np.float64),
    )
