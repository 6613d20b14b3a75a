"""Target vectors alpha in R^n with their rational-relation certificates.

A certificate consists of an integer matrix whose rows b_j pair with alpha to
give rational multiples a_j/q_j of log(p_j)/(2*pi) for distinct primes p_j.
Rows are canonicalized so that a_j >= 1 (flip the row sign if needed), which
keeps every integer mode on the positive side of the lattice.

No integer-relation detection is attempted: certificates are supplied by the
caller or produced by solving the relation system exactly over the rationals.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetError, ValidationError
from .primes import is_prime

_RESIDUAL_TOL = 1e-12
_INTEGER_TOL = 1e-9
_ENUM_BUDGET = 10**8


def _rational_rank(rows: list[list[int]]) -> int:
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


@dataclass(frozen=True, eq=False)
class AlphaSpec:
    n: int
    alpha: np.ndarray
    matrix: np.ndarray  # (r, n) integer rows b_j
    rationals: tuple[tuple[int, int], ...]  # (a_j, q_j), fully reduced, a_j >= 1
    primes: tuple[int, ...]
    c_alpha: float = 1.0

    def __post_init__(self):
        alpha = np.asanyarray(self.alpha, dtype=np.float64).reshape(self.n)
        mat = np.asanyarray(self.matrix, dtype=np.int64).reshape(-1, self.n)
        r = mat.shape[0]
        if len(self.rationals) != r or len(self.primes) != r:
            raise ValidationError("certificate rows, rationals, and primes must align")
        if self.c_alpha <= 0:
            raise ValidationError("condition constant must be positive")
        if len(set(self.primes)) != r:
            raise ValidationError("certificate primes must be pairwise distinct")
        for p in self.primes:
            if not is_prime(int(p)):
                raise ValidationError(f"certificate prime {p} is not prime")
        for a, q in self.rationals:
            if q < 1:
                raise ValidationError("denominators must be positive")
            if a < 1:
                raise ValidationError("numerators must be >= 1 after row canonicalization")
            if math.gcd(a, q) != 1:
                raise ValidationError(f"rational {a}/{q} is not fully reduced")
        for j in range(r):
            row = mat[j]
            if not row.any():
                raise ValidationError("certificate rows must be nonzero")
            if math.gcd(*(int(abs(x)) for x in row)) != 1:
                raise ValidationError(f"row {list(row)} has gcd != 1")
        if r and _rational_rank(mat.tolist()) != r:
            raise ValidationError("certificate rows must be linearly independent")
        if r:
            targets = np.array(
                [a / q * math.log(p) / (2 * math.pi) for (a, q), p in zip(self.rationals, self.primes)]
            )
            residual = np.max(np.abs(mat @ alpha - targets))
            if residual > _RESIDUAL_TOL:
                raise ValidationError(f"certificate residual {residual:.3e} exceeds 1e-12")
        alpha.flags.writeable = False
        mat.flags.writeable = False
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "matrix", mat)

    @property
    def r(self) -> int:
        return self.matrix.shape[0]

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "alpha": [float(x) for x in self.alpha],
            "M": [[int(x) for x in row] for row in self.matrix],
            "rationals": [[a, q] for a, q in self.rationals],
            "primes": list(self.primes),
            "C_alpha": self.c_alpha,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AlphaSpec":
        doc = json.loads(text)
        mat, rats = _canonicalize_rows(doc["M"], [tuple(x) for x in doc["rationals"]])
        return cls(
            n=int(doc["n"]),
            alpha=np.asarray(doc["alpha"], dtype=np.float64),
            matrix=mat,
            rationals=rats,
            primes=tuple(int(p) for p in doc["primes"]),
            c_alpha=float(doc.get("C_alpha", 1.0)),
        )

    @classmethod
    def load(cls, path) -> "AlphaSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    @classmethod
    def unrelated(cls, alpha, c_alpha: float = 1.0) -> "AlphaSpec":
        """Empty certificate (r = 0): no known rational relations."""
        alpha = np.asarray(alpha, dtype=np.float64)
        return cls(
            n=alpha.size,
            alpha=alpha,
            matrix=np.empty((0, alpha.size), dtype=np.int64),
            rationals=(),
            primes=(),
            c_alpha=c_alpha,
        )


def _canonicalize_rows(matrix, rationals):
    """Flip row signs so every numerator is positive; reduce fractions."""
    mat = np.asarray(matrix, dtype=np.int64).reshape(len(rationals), -1)
    out_rows = []
    out_rats = []
    for row, (a, q) in zip(mat, rationals):
        a, q = int(a), int(q)
        if q < 0:
            a, q = -a, -q
        if a == 0:
            raise ValidationError("relation numerators must be nonzero")
        if a < 0:
            a, row = -a, -row
        g = math.gcd(a, q)
        out_rows.append(row)
        out_rats.append((a // g, q // g))
    return np.array(out_rows, dtype=np.int64), tuple(out_rats)


def solve_alpha(
    matrix,
    rationals,
    primes,
    free_components=None,
    c_alpha: float | None = None,
) -> AlphaSpec:
    """Solve M alpha^T = (a_j/q_j log(p_j)/(2 pi))_j exactly over the rationals.

    For r < n the caller supplies values for the n - r non-pivot coordinates
    (in column order).  The system is eliminated with Fraction arithmetic and
    alpha is assembled as exact rational combinations of log(p_j), so the
    residual sits at float rounding level.
    """
    mat, rats = _canonicalize_rows(matrix, [tuple(x) for x in rationals])
    primes = tuple(int(p) for p in primes)
    r, n = mat.shape
    if r > n:
        raise ValidationError("more relations than dimensions")
    # Row-reduce [M | I] over Q to find pivot columns and the solving transform.
    aug = [[Fraction(int(x)) for x in row] + [Fraction(i == j) for j in range(r)] for i, row in enumerate(mat)]
    pivots: list[int] = []
    rank = 0
    for col in range(n):
        pivot = next((i for i in range(rank, r) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        inv = 1 / aug[rank][col]
        aug[rank] = [x * inv for x in aug[rank]]
        for i in range(r):
            if i != rank and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[rank])]
        pivots.append(col)
        rank += 1
    if rank != r:
        raise ValidationError("certificate rows are linearly dependent (singular system)")
    free_cols = [c for c in range(n) if c not in pivots]
    if free_cols:
        if free_components is None or len(free_components) != len(free_cols):
            raise ValidationError(
                f"system has {len(free_cols)} free components; supply that many values"
            )
        free_values = [float(v) for v in free_components]
    else:
        free_values = []
    logp = [math.log(p) for p in primes]
    two_pi = 2 * math.pi
    alpha = np.zeros(n, dtype=np.float64)
    for c, v in zip(free_cols, free_values):
        alpha[c] = v
    # alpha[pivot_i] = sum_j T[i][j] * (a_j/q_j) log(p_j)/2pi - sum_free T-adjusted
    for i, col in enumerate(pivots):
        acc = 0.0
        for j in range(r):
            coeff = aug[i][n + j]
            if coeff:
                a, q = rats[j]
                acc += float(coeff * Fraction(a, q)) * logp[j] / two_pi
        for fc, fv in zip(free_cols, free_values):
            coeff = aug[i][fc]
            if coeff:
                acc -= float(coeff) * fv
        alpha[col] = acc
    if c_alpha is None:
        spec = AlphaSpec(n=n, alpha=alpha, matrix=mat, rationals=rats, primes=primes, c_alpha=1.0)
        bound = min(10, int(math.floor((_ENUM_BUDGET) ** (1.0 / n) / 2)))
        report = verify_condition(spec, max(1, bound))
        c_est = max(report.min_ratio * 0.5, 1e-300)
        return AlphaSpec(n=n, alpha=alpha, matrix=mat, rationals=rats, primes=primes, c_alpha=c_est)
    return AlphaSpec(n=n, alpha=alpha, matrix=mat, rationals=rats, primes=primes, c_alpha=c_alpha)


@dataclass(frozen=True)
class ConditionReport:
    min_ratio: float
    argmin: tuple[int, ...]
    bound: int
    satisfied: bool


def _mode_blocks(n: int, bound: int, chunk: int = 200_000):
    """Yield blocks of integer vectors with sup-norm <= bound, excluding 0."""
    side = 2 * bound + 1
    total = side**n
    ranges = [np.arange(-bound, bound + 1)] * n
    grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(total, n)
    nonzero = np.any(grid != 0, axis=1)
    grid = grid[nonzero]
    for start in range(0, grid.shape[0], chunk):
        yield grid[start : start + chunk]


def verify_condition(spec: AlphaSpec, bound: int) -> ConditionReport:
    """Scan all m with sup-norm <= bound for the linear-form lower bound.

    Reports min over m != 0 of |m . alpha| / exp(-||m||_2); the certificate
    is plausible when this stays above c_alpha.  Refuses enumerations beyond
    1e8 vectors.
    """
    if bound < 1:
        raise ValidationError("bound must be >= 1")
    if (2 * bound + 1) ** spec.n > _ENUM_BUDGET:
        raise BudgetError(
            f"(2B+1)^n = {(2 * bound + 1) ** spec.n:.2e} exceeds the 1e8 enumeration "
            "budget; lower B or split the scan"
        )
    best = math.inf
    arg = None
    for block in _mode_blocks(spec.n, bound):
        dots = np.abs(block @ spec.alpha)
        norms = np.linalg.norm(block, axis=1)
        ratios = dots / np.exp(-norms)
        k = int(np.argmin(ratios))
        if ratios[k] < best:
            best = float(ratios[k])
            arg = tuple(int(x) for x in block[k])
    return ConditionReport(
        min_ratio=best, argmin=arg, bound=bound, satisfied=best >= spec.c_alpha
    )


@dataclass(frozen=True)
class ModeWitness:
    m: tuple[int, ...]
    j: int  # 1-based certificate row
    l: int
    x: float  # e^{2 pi m.alpha} = p_j^{a_j l}


@dataclass(frozen=True)
class ModeClassification:
    matches: tuple[ModeWitness, ...]
    composites: tuple[tuple[tuple[int, ...], float], ...]  # integer but multi-prime
    ambiguous: tuple[tuple[int, ...], ...]
    unresolved: int = 0  # unwitnessed modes beyond float integer resolution


def _lattice_coefficients(spec: AlphaSpec, m: np.ndarray) -> list[int] | None:
    """Solve m = sum_j l_j (q_j b_j) over the integers, if possible."""
    rows = [
        [Fraction(int(q * b)) for b in spec.matrix[j]]
        for j, (_, q) in enumerate(spec.rationals)
    ]
    target = [Fraction(int(x)) for x in m]
    # Least squares over Q via normal equations (rows independent => unique).
    r = len(rows)
    gram = [[sum(rows[i][k] * rows[j][k] for k in range(spec.n)) for j in range(r)] for i in range(r)]
    rhs = [sum(rows[i][k] * target[k] for k in range(spec.n)) for i in range(r)]
    # Gaussian elimination on the Gram system.
    for col in range(r):
        pivot = next((i for i in range(col, r) if gram[i][col] != 0), None)
        if pivot is None:
            return None
        gram[col], gram[pivot] = gram[pivot], gram[col]
        rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        inv = 1 / gram[col][col]
        gram[col] = [x * inv for x in gram[col]]
        rhs[col] *= inv
        for i in range(r):
            if i != col and gram[i][col] != 0:
                f = gram[i][col]
                gram[i] = [a - f * b for a, b in zip(gram[i], gram[col])]
                rhs[i] -= f * rhs[col]
    coeffs = rhs
    if any(c.denominator != 1 for c in coeffs):
        return None
    # Confirm the solution reproduces m exactly.
    for k in range(spec.n):
        if sum(coeffs[j] * rows[j][k] for j in range(r)) != target[k]:
            return None
    return [int(c) for c in coeffs]


# Proximity testing happens in log space; beyond e^y ~ 1e8 the gaps between
# logarithms of integers drop under 10x the 1e-9 tolerance and a float test
# stops being informative.
_LOG_RESOLVE = math.log(1e8)


def classify_integer_modes(spec: AlphaSpec, j_bound: float) -> ModeClassification:
    """Classify modes with ||m||_2 <= j_bound whose exponential is an integer.

    Certificate witnesses are solved exactly over the integers first: a mode
    equal to l q_j b_j exponentiates to the prime power p_j^(a_j l); a
    nonnegative multi-row combination gives a composite integer (which gets
    zero weight in the density); mixed-sign combinations are exact rational
    non-integers.  Unwitnessed modes are tested for integer proximity at
    relative 1e-9 in log space and flagged as ambiguous when they pass, never
    silently dropped.  Unwitnessed modes beyond float integer resolution are
    counted in ``unresolved``; treating them as non-integers is sound when
    the certificate row count is maximal, which is the caller's obligation.
    """
    bound = int(math.floor(j_bound))
    if bound < 1:
        return ModeClassification((), (), ())
    matches = []
    composites = []
    ambiguous = []
    unresolved = 0
    for block in _mode_blocks(spec.n, bound):
        norms = np.linalg.norm(block, axis=1)
        block = block[norms <= j_bound]
        for m in block:
            coeffs = _lattice_coefficients(spec, m) if spec.r else None
            if coeffs is not None:
                if all(c >= 0 for c in coeffs):
                    active = [j for j, c in enumerate(coeffs) if c > 0]
                    exact = 1
                    for j in active:
                        exact *= spec.primes[j] ** (spec.rationals[j][0] * coeffs[j])
                    if len(active) == 1:
                        j = active[0]
                        matches.append(
                            ModeWitness(tuple(int(v) for v in m), j + 1, coeffs[j], float(exact))
                        )
                    else:
                        composites.append((tuple(int(v) for v in m), float(exact)))
                # mixed signs: exact rational with distinct primes, never integer
                continue
            y = 2 * math.pi * float(m @ spec.alpha)
            if abs(y) <= _INTEGER_TOL:
                # x_m ~ 1: a near-vanishing linear form, worth human eyes
                ambiguous.append(tuple(int(v) for v in m))
            elif y <= 0:
                continue  # x_m in (0, 1): not an integer
            elif y > _LOG_RESOLVE:
                unresolved += 1
            elif abs(y - math.log(round(math.exp(y)))) <= _INTEGER_TOL and round(math.exp(y)) >= 2:
                ambiguous.append(tuple(int(v) for v in m))
    matches.sort(key=lambda w: (w.j, w.l, w.m))
    composites.sort()
    ambiguous.sort()
    return ModeClassification(tuple(matches), tuple(composites), tuple(ambiguous), unresolved)
