"""Prime sieves and integer factorization helpers shared across the package."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def sieve(limit: int) -> np.ndarray:
    """Primes p <= limit, ascending, as an int64 array."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def segmented_primes(lo: float, hi: float) -> np.ndarray:
    """Primes in [lo, hi] via a segmented sieve; suitable for hi ~ 1e9."""
    lo_i = max(2, int(np.ceil(lo)))
    hi_i = int(np.floor(hi))
    if hi_i < lo_i:
        return np.empty(0, dtype=np.int64)
    base = sieve(int(hi_i**0.5) + 1)
    flags = np.ones(hi_i - lo_i + 1, dtype=bool)
    for p in base:
        start = max(p * p, ((lo_i + p - 1) // p) * p)
        if start <= hi_i:
            flags[start - lo_i :: p] = False
    out = np.nonzero(flags)[0] + lo_i
    return out[out >= 2].astype(np.int64)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def spf_table(limit: int) -> np.ndarray:
    """Smallest prime factor for every n <= limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] with p ascending."""
    if n < 1:
        raise ValidationError(f"cannot factorize {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def prime_power_split(n: int) -> tuple[int, int] | None:
    """Return (p, m) if n = p^m for a prime p and m >= 1, else None."""
    if n < 2:
        return None
    fac = factorize(n)
    if len(fac) == 1:
        return fac[0]
    return None
