"""Exact integer q-expansions for the two level-1 eigenform fixtures.

The discriminant form's coefficients tau(n) come from the cube of Euler's
product, using Jacobi's identity

    prod_{n>=1} (1 - q^n)^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2},

so the full 24th power is the 8th power of a sparse series.  Powers and
products of truncated series are computed exactly by Kronecker substitution:
pack coefficients into base-2^B digits of one big integer, multiply once with
GMP, and read the digits back.  All results are exact Python ints.
"""

from __future__ import annotations

import numpy as np

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    mpz = int

from .errors import ValidationError

# Slot widths in bits.  Digit recovery needs |coefficient| < 2^(B-1); the
# eighth power of eta^3 up to degree 8e6 stays below 2^140, and the
# tau * sigma_3 convolutions below 2^200, so both have a wide safety margin.
_B_POW = 192
_B_MUL = 256


def _pack_nonneg(values, n_slots: int, slot_bits: int) -> int:
    """Pack nonnegative ints values[i] into digit i of a base-2^slot_bits int."""
    sb = slot_bits // 8
    buf = bytearray(n_slots * sb)
    for i, v in enumerate(values):
        if v:
            buf[i * sb : i * sb + sb] = int(v).to_bytes(sb, "little")
    return int.from_bytes(bytes(buf), "little")


def _unpack_digits(value: int, n_slots: int, slot_bits: int, signed: bool) -> list[int]:
    """Read base-2^slot_bits digits 0..n_slots-1 of a nonnegative integer.

    With signed=True, interprets digits as a borrow chain produced by a
    polynomial with mixed-sign coefficients: digit >= 2^(slot_bits-1) means a
    negative coefficient that borrowed one unit from the next digit.
    """
    if value < 0:
        raise ValidationError("packed value must be nonnegative")
    sb = slot_bits // 8
    mask = (1 << (slot_bits * n_slots)) - 1
    data = (value & mask).to_bytes(n_slots * sb, "little")
    raw = [int.from_bytes(data[i * sb : i * sb + sb], "little") for i in range(n_slots)]
    if not signed:
        return raw
    half = 1 << (slot_bits - 1)
    full = 1 << slot_bits
    out = []
    borrow = 0
    for d in raw:
        neg = d >= half
        c = d - full + borrow if neg else d + borrow
        # The recovery is only unique well inside the slot range; the packers
        # guarantee a >= 2^40 margin, so treat anything close as corruption.
        if abs(c) >= half >> 8:
            raise ValidationError("packed coefficient out of recoverable range")
        out.append(c)
        borrow = 1 if neg else 0
    return out


def eta3_coefficients(n_terms: int) -> list[int]:
    """Coefficients of prod (1-q^n)^3 up to degree n_terms - 1 (Jacobi's form)."""
    coeffs = [0] * n_terms
    j = 0
    while j * (j + 1) // 2 < n_terms:
        coeffs[j * (j + 1) // 2] = (2 * j + 1) * (-1 if j % 2 else 1)
        j += 1
    return coeffs


def tau_series(n: int) -> list[int]:
    """Exact tau(1..n) for the weight-12 level-1 cusp form."""
    if n < 1:
        raise ValidationError("need n >= 1")
    psi = eta3_coefficients(n)
    pos = _pack_nonneg([c if c > 0 else 0 for c in psi], n, _B_POW)
    neg = _pack_nonneg([-c if c < 0 else 0 for c in psi], n, _B_POW)
    x = mpz(pos) - mpz(neg)
    x2 = x * x
    x4 = x2 * x2
    x8 = x4 * x4
    # tau(m) is the coefficient of q^(m-1) in (eta^3)^8.
    return _unpack_digits(int(x8), n, _B_POW, signed=True)


def sigma3_series(n: int) -> np.ndarray:
    """sigma_3(1..n) as int64 (exact for n <= ~2e6); index 0 holds sigma_3(1)."""
    if n < 1:
        raise ValidationError("need n >= 1")
    if n > 1_900_000:
        raise ValidationError("sigma_3 would overflow int64 beyond ~1.9e6")
    out = np.zeros(n + 1, dtype=np.int64)
    for d in range(1, n + 1):
        out[d::d] += np.int64(d) ** 3
    return out[1:]


def weight16_series(n: int) -> list[int]:
    """Exact a(1..n) for the unique normalized level-1 weight-16 eigenform.

    Built as the product of the tau series with 1 + 240 sum sigma_3(m) q^m.
    """
    if n < 1:
        raise ValidationError("need n >= 1")
    tau = tau_series(n)
    if n == 1:
        return [1]
    sig = sigma3_series(n - 1)
    # Slot m holds tau(m) (m = 1..n); slot k holds sigma_3(k) (k = 1..n-1).
    tpos = _pack_nonneg([0] + [t if t > 0 else 0 for t in tau], n + 1, _B_MUL)
    tneg = _pack_nonneg([0] + [-t if t < 0 else 0 for t in tau], n + 1, _B_MUL)
    spacked = _pack_nonneg([0] + [int(s) for s in sig], n + 1, _B_MUL)
    conv_pos = _unpack_digits(int(mpz(tpos) * mpz(spacked)), n + 1, _B_MUL, signed=False)
    conv_neg = _unpack_digits(int(mpz(tneg) * mpz(spacked)), n + 1, _B_MUL, signed=False)
    return [tau[m - 1] + 240 * (conv_pos[m] - conv_neg[m]) for m in range(1, n + 1)]
