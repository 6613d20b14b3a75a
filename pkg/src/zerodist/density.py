"""The signed torus density behind the second-order zero-count term.

For a certificate row (b_j, a_j/q_j, p_j) the density collects the lattice
modes l q_j b_j with prime-power weights, giving

    g(t) = -(2/pi) * sum_j sum_{l>=1} (Lam(p_j^{a_j l}) / p_j^{a_j l / 2})
                                      * cos(2 pi q_j l (b_j . t)),

where Lam is the coefficient of the logarithmic derivative.  With no
certificate rows the density is identically zero.  Series tails are
controlled by the geometric bound |Lam(p^m)| <= 2 p^(m theta) log p; for
theta = 0 and one row this reproduces the classical envelope
4 log p / (pi p^a (1 - p^{-a/2})).

Box integrals are always evaluated in closed form; numeric quadrature exists
only in the test suite as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alpha import AlphaSpec
from .errors import ValidationError
from .lfunctions import LFunctionData
from .torus import FourierPoly

_TWO_OVER_PI = 2.0 / math.pi


@dataclass(frozen=True)
class DensityEval:
    value: float
    tail: float


class DensityModel:
    """Evaluable density for one form and one alpha certificate.

    Pure and deterministic: sums always run over rows in order, then over
    l ascending, so results are independent of any outer parallelism.
    """

    def __init__(self, form: LFunctionData, spec: AlphaSpec):
        self.form = form
        self.spec = spec
        if float(form.theta) >= 0.5:
            raise ValidationError("need theta < 1/2 for a convergent mode series")
        self._ratios = [
            float(p) ** ((float(form.theta) - 0.5) * a)
            for (a, _), p in zip(spec.rationals, spec.primes)
        ]
        self._amp_cache: dict[int, np.ndarray] = {}

    # -- series bookkeeping ---------------------------------------------------

    def amplitudes(self, j: int, levels: int) -> np.ndarray:
        """Weights Lam(p_j^{a_j l}) / p_j^{a_j l / 2} for l = 1..levels (0-based j)."""
        cached = self._amp_cache.get(j)
        if cached is None or cached.size < levels:
            a, _ = self.spec.rationals[j]
            p = self.spec.primes[j]
            s = self.form.satake_power_sums(p, a * levels)
            l_range = np.arange(1, levels + 1)
            amp = s[a * l_range - 1] * math.log(p) / np.power(float(p), a * l_range / 2.0)
            amp.flags.writeable = False
            self._amp_cache[j] = amp
            cached = amp
        return cached[:levels]

    def tail_bound(self, levels: int) -> float:
        """Rigorous bound on the weight dropped beyond l = levels, all rows."""
        total = 0.0
        for (a, _), p, r in zip(self.spec.rationals, self.spec.primes, self._ratios):
            total += 2.0 * math.log(p) * r ** (levels + 1) / (1.0 - r)
        return _TWO_OVER_PI * total

    def _levels_for(self, tol: float) -> int:
        if tol <= 0:
            raise ValidationError("tolerance must be positive")
        levels = 1
        while self.tail_bound(levels) > tol:
            levels += 1
            if levels > 100_000:
                raise ValidationError("tolerance unreachable; theta too close to 1/2?")
        return levels

    # -- evaluation -----------------------------------------------------------

    def eval(self, t, tol: float = 1e-9) -> DensityEval:
        return DensityEval(
            float(self.eval_many(np.asarray(t, dtype=np.float64).reshape(1, -1), tol)[0]),
            0.0 if self.spec.r == 0 else self.tail_bound(self._levels_for(tol)),
        )

    def eval_many(self, points, tol: float = 1e-9) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64).reshape(-1, self.spec.n)
        out = np.zeros(pts.shape[0])
        if self.spec.r == 0:
            return out
        levels = self._levels_for(tol)
        for j in range(self.spec.r):
            _, q = self.spec.rationals[j]
            amp = self.amplitudes(j, levels)
            u = pts @ self.spec.matrix[j].astype(np.float64)
            for l in range(1, levels + 1):
                out -= _TWO_OVER_PI * amp[l - 1] * np.cos(2.0 * math.pi * q * l * u)
        return out

    def integrate_box(self, box, tol: float = 1e-12) -> float:
        """Exact (closed-form) integral of the density over a product box."""
        box = [(float(lo), float(hi)) for lo, hi in box]
        if len(box) != self.spec.n:
            raise ValidationError("box dimension mismatch")
        if self.spec.r == 0:
            return 0.0
        levels = self._levels_for(tol)
        total = 0.0
        for j in range(self.spec.r):
            _, q = self.spec.rationals[j]
            amp = self.amplitudes(j, levels)
            b = self.spec.matrix[j]
            for l in range(1, levels + 1):
                prod = complex(1.0)
                for k in range(self.spec.n):
                    prod *= _interval_factor(q * l * int(b[k]), *box[k])
                    if prod == 0:
                        break
                total -= _TWO_OVER_PI * amp[l - 1] * prod.real
        return total

    def pair_with_h(self, h: FourierPoly) -> float:
        """integral of h * g over the torus, via Fourier coefficients.

        Only modes l q_j b_j inside h's finite support contribute, so the
        l sum is exact (terminates at the support radius).
        """
        if h.n != self.spec.n:
            raise ValidationError("test function dimension mismatch")
        if self.spec.r == 0:
            return 0.0
        total = 0.0
        j_max = h.j_max
        for j in range(self.spec.r):
            _, q = self.spec.rationals[j]
            b = self.spec.matrix[j]
            row_norm = q * math.hypot(*(float(x) for x in b))
            l_cap = int(math.floor(j_max / row_norm)) if row_norm else 0
            if l_cap < 1:
                continue
            amp = self.amplitudes(j, l_cap)
            for l in range(1, l_cap + 1):
                c = h.coefficient(tuple(q * l * int(x) for x in b))
                if c:
                    total -= _TWO_OVER_PI * amp[l - 1] * c.real
        return total


def _interval_factor(c: int, lo: float, hi: float) -> complex:
    """integral over [lo, hi] of exp(-2 pi i c t) dt."""
    if c == 0:
        return complex(hi - lo)
    w = 2.0 * math.pi * c
    return (np.exp(-1j * w * hi) - np.exp(-1j * w * lo)) / (-1j * w)


def first_mode_envelope(form: LFunctionData, p: int, a: int = 1) -> float:
    """Sup-norm bound for the density minus its leading cosine term.

    Single-row certificate at a log p / (2 pi q): the l >= 2 tail obeys
    (2/pi) * sum_{l>=2} 2 log p / p^{a l / 2}
      = 4 log p / (pi p^a (1 - p^{-a/2})),
    valid whenever the eigenvalues satisfy the theta = 0 bound.
    """
    if float(form.theta) != 0.0:
        raise ValidationError("the closed-form envelope assumes theta = 0")
    return 4.0 * math.log(p) / (math.pi * p**a * (1.0 - p ** (-a / 2.0)))
