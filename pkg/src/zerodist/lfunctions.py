"""Degree-2 L-function data: eigenvalues, local factors, and zero ordinates.

Everything is analytically normalized: lambda(n) = a(n) / n^((k-1)/2), so
Deligne's bound reads |lambda(p)| <= 2 at unramified primes.  Zero ordinates
are the positive imaginary parts of nontrivial zeros; the data is assumed to
sit on the critical line.  Instances are immutable after construction and
safe for concurrent readers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DataError, ParseError, RangeError, ValidationError
from .primes import factorize

_THETA_MAX = Fraction(7, 64)


def parse_zeros(path, limit: int | None = None) -> np.ndarray:
    """Read ascending positive zero ordinates, one decimal per line.

    Lines starting with '#' and blank lines are skipped.  Rejects
    non-numeric, non-positive, or non-increasing entries.
    """
    out = []
    last = 0.0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                value = float(text)
            except ValueError:
                raise ParseError(f"not a decimal ordinate: {text!r}", line=lineno)
            if not math.isfinite(value) or value <= 0.0:
                raise ValidationError(f"line {lineno}: ordinate must be positive, got {value}")
            if value <= last:
                raise ValidationError(
                    f"line {lineno}: ordinates must be strictly increasing "
                    f"({value} after {last})"
                )
            out.append(value)
            last = value
            if limit is not None and len(out) >= limit:
                break
    arr = np.asarray(out, dtype=np.float64)
    arr.flags.writeable = False
    return arr


def write_zeros(path, zeros, header: str | None = None) -> None:
    """Write ordinates one per line using shortest round-trip decimals."""
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for g in zeros:
            fh.write(f"{float(g)!r}\n")


def read_coefficients(path, weight: int) -> dict[int, float]:
    """Read a coefficient file into a map n -> normalized lambda(n).

    First non-comment line must be 'format: lambda' (lines "n value") or
    'format: ap' (lines "p a_p" with integer a_p, normalized by p^((k-1)/2)).
    """
    lam: dict[int, float] = {}
    fmt = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if fmt is None:
                if not text.startswith("format:"):
                    raise ParseError("missing 'format: lambda|ap' header", line=lineno)
                fmt = text.split(":", 1)[1].strip()
                if fmt not in ("lambda", "ap"):
                    raise ParseError(f"unknown coefficient format {fmt!r}", line=lineno)
                continue
            parts = text.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'n value', got {text!r}", line=lineno)
            try:
                n = int(parts[0])
                if fmt == "ap":
                    value = int(parts[1]) / float(n) ** ((weight - 1) / 2)
                else:
                    value = float(parts[1])
            except ValueError:
                raise ParseError(f"bad number in {text!r}", line=lineno)
            if n < 1:
                raise ValidationError(f"line {lineno}: index must be >= 1")
            lam[n] = value
    return lam


def write_coefficients(path, entries, fmt: str = "ap") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"format: {fmt}\n")
        for n, v in entries:
            fh.write(f"{n} {v!r}\n" if fmt == "lambda" else f"{n} {int(v)}\n")


@dataclass(frozen=True, eq=False)
class LFunctionData:
    """A newform's L-function data, immutable after construction."""

    label: str
    level: int
    weight: int
    theta: Fraction
    lam: dict[int, float]  # n -> lambda(n); primes suffice
    zeros: np.ndarray = field(default_factory=lambda: np.empty(0))
    t_max: float = 0.0

    def __post_init__(self):
        if self.level < 1:
            raise ValidationError("level must be a positive integer")
        if self.weight < 2 or self.weight % 2:
            raise ValidationError("weight must be an even integer >= 2")
        if not (0 <= self.theta <= _THETA_MAX):
            raise ValidationError(f"theta must lie in [0, 7/64], got {self.theta}")
        if self.lam.get(1, 1.0) != 1.0:
            raise ValidationError("lambda(1) must be 1")
        self.lam.setdefault(1, 1.0)
        bound_slack = 1e-9
        for p, v in self.lam.items():
            if p in (2, 3, 5, 7, 11, 13) and self.level % p != 0:
                if abs(v) > 2.0 * p ** float(self.theta) + bound_slack:
                    raise ValidationError(f"lambda({p}) = {v} violates the Deligne-type bound")
        zeros = np.asarray(self.zeros, dtype=np.float64)
        if zeros.size:
            if np.any(zeros <= 0) or np.any(np.diff(zeros) <= 0):
                raise ValidationError("zeros must be strictly increasing and positive")
            object.__setattr__(self, "t_max", float(zeros[-1]))
        zeros.flags.writeable = False
        object.__setattr__(self, "zeros", zeros)

    # -- local data ---------------------------------------------------------

    def chi(self, p: int) -> int:
        """Trivial-nebentypus character: 1 away from the level, 0 at it."""
        return 0 if self.level % p == 0 else 1

    def lambda_p(self, p: int) -> float:
        try:
            return self.lam[p]
        except KeyError:
            raise DataError(f"{self.label}: lambda({p}) not available") from None

    def lambda_at(self, n: int) -> float:
        """lambda(n) via multiplicativity and the Hecke prime-power recursion."""
        if n < 1:
            raise ValidationError("index must be >= 1")
        if n in self.lam:
            return self.lam[n]
        out = 1.0
        for p, e in factorize(n):
            out *= self._lambda_prime_power(p, e)
        return out

    def _lambda_prime_power(self, p: int, e: int) -> float:
        key = p**e
        if key in self.lam:
            return self.lam[key]
        lp = self.lambda_p(p)
        chi = self.chi(p)
        prev, cur = 1.0, lp
        for _ in range(e - 1):
            prev, cur = cur, lp * cur - chi * prev
        return cur

    def lambda_range(self, n: int) -> np.ndarray:
        """lambda(1..n) as a dense array (index m-1 holds lambda(m))."""
        out = np.empty(n, dtype=np.float64)
        out[0] = 1.0
        spf = np.zeros(n + 1, dtype=np.int64)
        for p in range(2, n + 1):
            if spf[p] == 0:
                spf[p::p][spf[p::p] == 0] = p
        for m in range(2, n + 1):
            p = int(spf[m])
            q, e = m, 0
            while q % p == 0:
                q //= p
                e += 1
            v = self._lambda_prime_power(p, e)
            out[m - 1] = v if q == 1 else v * out[q - 1]
        return out

    def satake_power_sums(self, p: int, m_max: int) -> np.ndarray:
        """Power sums s_1..s_m of the local Satake parameters at p.

        s_m = lambda(p) s_{m-1} - chi(p) s_{m-2}, with s_0 = 2 at unramified
        primes (two local roots) and s_0 = 1 at ramified ones (degree-1 factor).
        """
        if m_max < 1:
            raise ValidationError("need m_max >= 1")
        lp = self.lambda_p(p)
        chi = self.chi(p)
        s = np.empty(m_max + 1, dtype=np.float64)
        s[0] = 2.0 if chi else 1.0
        s[1] = lp
        for m in range(2, m_max + 1):
            s[m] = lp * s[m - 1] - chi * s[m - 2]
        return s[1:]

    def von_mangoldt(self, p: int, m: int) -> float:
        """Coefficient of the logarithmic derivative at p^m: s_m(p) log p."""
        return float(self.satake_power_sums(p, m)[m - 1]) * math.log(p)

    def von_mangoldt_at(self, n: int) -> float:
        """Same, by integer index; zero off prime powers."""
        if n < 2:
            return 0.0
        fac = factorize(n)
        if len(fac) != 1:
            return 0.0
        p, m = fac[0]
        return self.von_mangoldt(p, m)


def load_form(manifest_path) -> LFunctionData:
    """Build LFunctionData from a JSON manifest.

    Schema: {label, level, weight, theta_num, theta_den, coeff_path,
    zeros_path}; relative paths resolve against the manifest's directory.
    zeros_path may be null for forms used only through their coefficients.
    """
    manifest_path = Path(manifest_path)
    with open(manifest_path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("label", "level", "weight", "theta_num", "theta_den", "coeff_path"):
        if key not in doc:
            raise ValidationError(f"manifest missing key {key!r}")
    base = manifest_path.parent
    lam = read_coefficients(base / doc["coeff_path"], int(doc["weight"]))
    zeros_path = doc.get("zeros_path")
    zeros = parse_zeros(base / zeros_path) if zeros_path else np.empty(0)
    form = LFunctionData(
        label=doc["label"],
        level=int(doc["level"]),
        weight=int(doc["weight"]),
        theta=Fraction(int(doc["theta_num"]), int(doc["theta_den"])),
        lam=lam,
        zeros=zeros,
    )
    _spot_check_multiplicativity(form)
    return form


def _spot_check_multiplicativity(form: LFunctionData, tol: float = 1e-9) -> None:
    pairs = [(2, 3), (2, 5), (3, 5), (2, 9), (4, 3)]
    for m, n in pairs:
        if m * n in form.lam and m in form.lam and n in form.lam:
            lhs = form.lam[m] * form.lam[n]
            rhs = form.lam[m * n]
            if abs(lhs - rhs) > tol * max(1.0, abs(rhs)):
                raise ValidationError(
                    f"{form.label}: lambda({m}){'*'}lambda({n}) != lambda({m * n})"
                )


def require_zeros(form: LFunctionData) -> np.ndarray:
    if form.zeros.size == 0:
        raise DataError(f"{form.label}: no zero ordinates loaded")
    return form.zeros


def check_height(form: LFunctionData, t: float) -> float:
    require_zeros(form)
    if t > form.t_max:
        raise RangeError(f"T = {t} exceeds the data height T_max = {form.t_max}")
    if t <= 0:
        raise RangeError("T must be positive")
    return float(t)
