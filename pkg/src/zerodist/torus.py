"""Real test functions on the n-torus stored as finite Fourier series.

Reality is enforced structurally: only one mode of each conjugate pair is
stored (the lexicographically positive one), the mirror being implied, so
every evaluation is real by construction.  Coefficients follow the analysis
convention c_m = integral of h(t) exp(-2 pi i m.t).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import ValidationError

_REALITY_TOL = 1e-12


def _lex_sign(m: tuple[int, ...]) -> int:
    for x in m:
        if x > 0:
            return 1
        if x < 0:
            return -1
    return 0


def _neg(m: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in m)


@dataclass(frozen=True, eq=False)
class FourierPoly:
    """h(t) = sum_m c_m exp(2 pi i m.t), finite support, real-valued."""

    n: int
    half_modes: dict  # canonical m (lex-positive) -> complex c_m; () key is c_0

    def __post_init__(self):
        clean = {}
        for m, c in self.half_modes.items():
            m = tuple(int(x) for x in m)
            if len(m) != self.n:
                raise ValidationError(f"mode {m} has wrong dimension")
            sign = _lex_sign(m)
            if sign < 0:
                raise ValidationError(f"mode {m} is not in canonical (lex-positive) form")
            c = complex(c)
            if sign == 0:
                if abs(c.imag) > _REALITY_TOL:
                    raise ValidationError("constant coefficient must be real")
                c = complex(c.real, 0.0)
            if c != 0:
                clean[m] = c
        object.__setattr__(self, "half_modes", clean)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_modes(cls, n: int, modes: dict) -> "FourierPoly":
        """Build from a full coefficient map, checking conjugate symmetry."""
        half = {}
        seen = set()
        for m, c in modes.items():
            m = tuple(int(x) for x in m)
            if m in seen:
                continue
            mirror = _neg(m)
            c = complex(c)
            c_mirror = complex(modes.get(mirror, c.conjugate()))
            if abs(c_mirror - c.conjugate()) > _REALITY_TOL:
                raise ValidationError(
                    f"modes {m}/{mirror} violate conjugate symmetry by "
                    f"{abs(c_mirror - c.conjugate()):.2e}"
                )
            seen.add(m)
            seen.add(mirror)
            if _lex_sign(m) >= 0:
                half[m] = c
            else:
                half[mirror] = c_mirror
        return cls(n, half)

    @classmethod
    def constant(cls, n: int, value: float) -> "FourierPoly":
        return cls(n, {(0,) * n: complex(value)})

    @classmethod
    def cosine(cls, n: int = 1, mode=None, amplitude: float = 1.0) -> "FourierPoly":
        """amplitude * cos(2 pi m.t); default m = (1, 0, ..., 0)."""
        m = tuple(mode) if mode is not None else (1,) + (0,) * (n - 1)
        return cls(n, {m: complex(amplitude / 2.0)})

    @classmethod
    def one_plus_cosine(cls, n: int = 1) -> "FourierPoly":
        m = (1,) + (0,) * (n - 1)
        return cls(n, {(0,) * n: 1.0, m: 0.5})

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "FourierPoly") -> "FourierPoly":
        if self.n != other.n:
            raise ValidationError("dimension mismatch")
        out = dict(self.half_modes)
        for m, c in other.half_modes.items():
            out[m] = out.get(m, 0j) + c
        return FourierPoly(self.n, out)

    def __mul__(self, scalar: float) -> "FourierPoly":
        return FourierPoly(self.n, {m: c * scalar for m, c in self.half_modes.items()})

    __rmul__ = __mul__

    # -- queries -------------------------------------------------------------

    def coefficient(self, m) -> complex:
        m = tuple(int(x) for x in m)
        if _lex_sign(m) >= 0:
            return self.half_modes.get(m, 0j)
        return self.half_modes.get(_neg(m), 0j).conjugate()

    def modes(self):
        """Iterate the full support as (m, c_m) pairs."""
        for m, c in self.half_modes.items():
            yield m, c
            if _lex_sign(m) > 0:
                yield _neg(m), c.conjugate()

    @property
    def j_max(self) -> float:
        return max((math.hypot(*m) for m in self.half_modes), default=0.0)

    def eval(self, t) -> float:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return float(self.eval_many(t.reshape(1, self.n))[0])

    def eval_many(self, points) -> np.ndarray:
        """Evaluate at an (N, n) array of points; real output."""
        pts = np.asarray(points, dtype=np.float64).reshape(-1, self.n)
        out = np.zeros(pts.shape[0])
        for m, c in self.half_modes.items():
            phase = 2.0 * math.pi * (pts @ np.asarray(m, dtype=np.float64))
            if _lex_sign(m) == 0:
                out += c.real
            else:
                out += 2.0 * (c.real * np.cos(phase) - c.imag * np.sin(phase))
        return out

    def integral(self) -> float:
        """Integral over the torus: the constant coefficient."""
        return self.half_modes.get((0,) * self.n, 0j).real

    def cosine_weight(self) -> float:
        """integral of h(t) cos(2 pi t) dt on the circle: Re c_1."""
        if self.n != 1:
            raise ValidationError("cosine weight is defined for n = 1 only")
        return self.half_modes.get((1,), 0j).real

    def min_on_grid(self, points_per_axis: int = 1000) -> float:
        if self.n == 1:
            grid = (np.arange(points_per_axis) / points_per_axis).reshape(-1, 1)
        else:
            per = max(2, int(round(points_per_axis ** (1.0 / self.n))))
            axes = [np.arange(per) / per] * self.n
            grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.n)
        return float(np.min(self.eval_many(grid)))

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        entries = [
            {"m": list(m), "re": c.real, "im": c.imag}
            for m, c in sorted(self.half_modes.items())
        ]
        return json.dumps({"n": self.n, "modes": entries}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FourierPoly":
        doc = json.loads(text)
        full = {}
        for entry in doc["modes"]:
            m = tuple(int(x) for x in entry["m"])
            full[m] = complex(entry["re"], entry["im"])
            full.setdefault(_neg(m), complex(entry["re"], -entry["im"]))
        return cls.from_modes(int(doc["n"]), full)

    @classmethod
    def load(cls, path) -> "FourierPoly":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


k_h = FourierPoly.cosine_weight  # the race functional, by its usual short name


def _box_coefficient(m_k: int, lo: float, hi: float) -> complex:
    if m_k == 0:
        return complex(hi - lo)
    c = 2.0 * math.pi * m_k
    return (np.exp(-1j * c * hi) - np.exp(-1j * c * lo)) / (-1j * c)


@dataclass(frozen=True)
class SmoothingReport:
    kernel_order: int
    leak: float  # kernel mass outside the +-eps cube (union bound over axes)
    truncation_l1: float  # l1 mass of coefficients dropped beyond j_max
    bound: float  # total sandwich slack


def smoothed_box(box, eps: float, j_max: float = 20.0) -> tuple[FourierPoly, SmoothingReport]:
    """Mollified box indicator: 1_B convolved with a product Fejer kernel.

    The kernel is nonnegative with unit mass and closed-form coefficients
    (1 - |m|/K per axis), so the output is a genuine smooth nonnegative bump
    up to the reported truncation.  Support in m is finite (|m_k| < K), and
    modes with ||m||_2 > j_max are dropped into the reported l1 bound.
    Returns the polynomial together with its sandwich slack report:
    1(B shrunk by eps) - bound <= h <= 1(B grown by eps) + bound pointwise.
    """
    box = [(float(lo), float(hi)) for lo, hi in box]
    n = len(box)
    for lo, hi in box:
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValidationError(f"box side [{lo}, {hi}] must sit inside [0, 1]")
    min_side = min(hi - lo for lo, hi in box)
    if min_side == 0.0:
        min_side = 1.0  # degenerate sides contribute a zero polynomial anyway
    if not (0.0 < eps < min(min_side, 1.0) / 2.0):
        raise ValidationError("need 0 < eps < min side length / 2")
    order = max(2, math.ceil(2.0 / eps))

    def fejer(m_k: int) -> float:
        return max(0.0, 1.0 - abs(m_k) / order)

    # Exact kernel mass inside [-eps, eps]: the kernel spectrum is finite.
    inside = 2.0 * eps
    for m_k in range(1, order):
        inside += 2.0 * fejer(m_k) * math.sin(2.0 * math.pi * m_k * eps) / (math.pi * m_k)
    leak_axis = max(0.0, 1.0 - inside)

    half = {}
    dropped = 0.0
    full_torus_axes = [hi - lo >= 1.0 for lo, hi in box]
    ranges = [
        np.arange(0 if full else -(order - 1), 1 if full else order)
        for full in full_torus_axes
    ]
    grids = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, n)
    for m in grids:
        m = tuple(int(x) for x in m)
        weight = reduce(lambda acc, mk: acc * fejer(mk), m, 1.0)
        if weight == 0.0:
            continue
        coeff = weight * reduce(
            lambda acc, km: acc * _box_coefficient(km[1], *box[km[0]]),
            enumerate(m),
            complex(1.0),
        )
        if coeff == 0:
            continue
        if math.hypot(*m) > j_max:
            dropped += abs(coeff)
            continue
        sign = _lex_sign(m)
        if sign > 0:
            half[m] = coeff
        elif sign == 0:
            half[m] = complex(coeff.real)
        # negative modes arrive as mirrors of positive ones
    poly = FourierPoly(n, half)
    report = SmoothingReport(
        kernel_order=order,
        leak=n * leak_axis,
        truncation_l1=dropped,
        bound=n * leak_axis + dropped,
    )
    return poly, report
