"""Tapered Dirichlet-polynomial approximation to the reciprocal L-function.

The inverse coefficients are the Dirichlet-convolution inverse of the
eigenvalues: multiplicative with mu(p) = -lambda(p), mu(p^2) = chi(p) and
zero on cubes and beyond, so that sum_{d|n} mu(d) lambda(n/d) = [n = 1].
The taper decays linearly in log n over the top half of the support, and the
length exponent must stay below 1/4 - theta/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ValidationError
from .lfunctions import LFunctionData


def mu_pi(form: LFunctionData, n_max: int) -> np.ndarray:
    """Inverse coefficients mu(1..n_max) (index m-1 holds mu(m))."""
    if n_max < 1:
        raise ValidationError("need n_max >= 1")
    out = np.ones(n_max, dtype=np.float64)
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, n_max + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    for m in range(2, n_max + 1):
        p = int(spf[m])
        q, e = m, 0
        while q % p == 0:
            q //= p
            e += 1
        if e == 1:
            local = -form.lambda_p(p)
        elif e == 2:
            local = float(form.chi(p))
        else:
            local = 0.0
        out[m - 1] = local * out[q - 1] if q > 1 else local
    return out


def taper(t, length: float, varpi: float):
    """Piecewise log-linear cutoff: 1 up to L^(varpi/2), 0 beyond L^varpi."""
    t = np.asarray(t, dtype=np.float64)
    cut = length**varpi
    half = length ** (varpi / 2.0)
    with np.errstate(divide="ignore"):
        ramp = 2.0 * (1.0 - np.log(np.maximum(t, 1e-300)) / math.log(cut))
    out = np.where(t <= half, 1.0, np.where(t > cut, 0.0, ramp))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class MollifierData:
    form: LFunctionData
    length: float  # the height parameter; polynomial support is length^varpi
    varpi: float
    mu: np.ndarray = field(init=False)

    def __post_init__(self):
        theta = float(self.form.theta)
        if not (0.0 < self.varpi < 0.25 - theta / 2.0):
            raise ValidationError(
                f"varpi must lie in (0, 1/4 - theta/2) = (0, {0.25 - theta / 2.0})"
            )
        if self.length <= 1.0:
            raise ValidationError("length parameter must exceed 1")
        support = int(math.floor(self.length**self.varpi))
        mu = mu_pi(self.form, max(1, support))
        mu.flags.writeable = False
        object.__setattr__(self, "mu", mu)

    @property
    def support(self) -> int:
        return self.mu.size

    def value(self, s: complex) -> complex:
        """M(s) = sum_{n <= length^varpi} mu(n) P(n) / n^s."""
        n = np.arange(1, self.support + 1, dtype=np.float64)
        weights = self.mu * taper(n, self.length, self.varpi)
        return complex(np.sum(weights * np.exp(-complex(s) * np.log(n))))

    def convolution_residual(self, n_max: int) -> float:
        """max_n |sum_{d|n} mu(d) lambda(n/d) - [n=1]| over n <= n_max."""
        n_max = min(n_max, self.support)
        lam = self.form.lambda_range(n_max)
        worst = 0.0
        for n in range(1, n_max + 1):
            acc = 0.0
            for d in range(1, int(math.isqrt(n)) + 1):
                if n % d == 0:
                    acc += self.mu[d - 1] * lam[n // d - 1]
                    if d * d != n:
                        acc += self.mu[n // d - 1] * lam[d - 1]
            target = 1.0 if n == 1 else 0.0
            worst = max(worst, abs(acc - target))
        return worst


def mollifier_value(form: LFunctionData, s: complex, length: float, varpi: float) -> complex:
    return MollifierData(form, length, varpi).value(s)
