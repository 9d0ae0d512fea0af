"""Exact contraction tests for nonnegative rational matrices.

The decision rho(A) < 1 is made in exact arithmetic: for nonnegative A
it holds iff I - A is invertible with entrywise nonnegative inverse
(equivalently, the Neumann series sum A^k converges).  A floating-point
power iteration provides the leading-eigenvalue estimate, and an exact
integer growth-rate estimator serves as an independent oracle for it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class RationalMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if n == 0:
            raise ValueError("matrix must be nonempty")
        for row in self.entries:
            if len(row) != n:
                raise ValueError("matrix must be square")
            for e in row:
                if e < 0:
                    raise ValueError(f"matrix must be nonnegative, got {e}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(e) for e in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @property
    def n(self) -> int:
        return len(self.entries)

    def apply(self, v: Sequence[Fraction]) -> list[Fraction]:
        return [sum(row[j] * v[j] for j in range(self.n)) for row in self.entries]

    def scaled_by_diagonal(self, diag: Sequence[Fraction]) -> "RationalMatrix":
        """D A D^-1 for a positive diagonal D; similarity, same spectrum."""
        if any(d <= 0 for d in diag):
            raise ValueError("diagonal entries must be positive")
        return RationalMatrix(
            tuple(
                tuple(diag[i] * self.entries[i][j] / diag[j] for j in range(self.n))
                for i in range(self.n)
            )
        )


def _inverse(rows: list[list[Fraction]]) -> list[list[Fraction]] | None:
    """Exact Gauss-Jordan inverse; None if singular."""
    n = len(rows)
    aug = [list(rows[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [e / p for e in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def is_contracting(a: RationalMatrix) -> bool:
    """Exact decision of rho(A) < 1 via the M-matrix characterization:
    I - A must be invertible with nonnegative inverse."""
    n = a.n
    rows = [
        [Fraction(int(i == j)) - a.entries[i][j] for j in range(n)]
        for i in range(n)
    ]
    inv = _inverse(rows)
    if inv is None:
        return False
    return all(e >= 0 for row in inv for e in row)


def leading_eigenvalue(
    a: RationalMatrix,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    window: int = 10,
) -> float:
    """Spectral radius by power iteration from the all-ones vector.

    Per-iteration L1 normalization yields a ratio sequence; geometric
    means over windows of length 1..window are compared against their
    values one window earlier, which damps the period-p oscillation of
    imprimitive matrices (any period up to the window converges).  ``tol``
    is the stopping threshold on successive window estimates.
    """
    n = a.n
    rows = [[float(e) for e in row] for row in a.entries]
    v = [1.0 / n] * n
    logsums = [0.0]  # cumulative log of ratios
    estimates: dict[int, list[float]] = {w: [] for w in range(1, window + 1)}
    for it in range(1, max_iter + 1):
        av = [sum(row[j] * v[j] for j in range(n)) for row in rows]
        norm = sum(abs(x) for x in av)
        if norm == 0.0:
            return 0.0
        v = [x / norm for x in av]
        logsums.append(logsums[-1] + math.log(norm))
        for w in range(1, window + 1):
            if it < w:
                continue
            g = math.exp((logsums[it] - logsums[it - w]) / w)
            series = estimates[w]
            series.append(g)
            if len(series) > w and abs(g - series[-1 - w]) <= tol * max(1.0, g):
                return g
    raise ArithmeticError(
        f"power iteration did not converge within {max_iter} iterations"
    )


@dataclass(frozen=True)
class AbelianVirtualEndo:
    """phi: Z^n -> Z^n defined on the sublattice L*Z^n, with matrix A."""

    matrix: RationalMatrix
    domain_scale: int

    def __post_init__(self):
        if self.domain_scale < 1:
            raise ValueError("domain scale must be a positive integer")
        for row in self.matrix.entries:
            for e in row:
                if (e * self.domain_scale).denominator != 1:
                    raise ValueError(
                        f"scale {self.domain_scale} does not clear denominator of {e}"
                    )

    @classmethod
    def from_matrix(
        cls, matrix: RationalMatrix, domain_scale: int | None = None
    ) -> "AbelianVirtualEndo":
        if domain_scale is None:
            domain_scale = 1
            for row in matrix.entries:
                for e in row:
                    domain_scale = math.lcm(domain_scale, e.denominator)
        return cls(matrix, domain_scale)


def contraction_coefficient_estimate(
    phi: AbelianVirtualEndo,
    n_steps: int = 40,
    trials: int = 20,
    seed: int = 0,
) -> float:
    """Growth-rate estimate of rho(phi): max over sample vectors v in
    L*Z^n of (|A^n v| / |v|)^(1/n), computed in exact arithmetic.

    The all-ones vector is always sampled (it dominates every basis
    vector, so the estimate is never starved of the leading direction);
    the rest are random positive integer vectors.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    a = phi.matrix
    n = a.n
    scale = phi.domain_scale
    rng = random.Random(seed)
    vectors = [[scale] * n]
    for _ in range(max(trials - 1, 0)):
        vectors.append([scale * rng.randint(1, 9) for _ in range(n)])
    best = 0.0
    for v0 in vectors:
        v = [Fraction(x) for x in v0]
        size0 = sum(abs(x) for x in v)
        for _ in range(n_steps):
            v = a.apply(v)
        size = sum(abs(x) for x in v)
        if size == 0:
            continue
        best = max(best, float(size / size0) ** (1.0 / n_steps))
    return best


def parse_matrix(text: str) -> RationalMatrix:
    """Matrix file format: first line n, then n rows of n rationals."""
    lines = [ln for ln in (raw.split("#", 1)[0].strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from None
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows after the dimension, got {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:], start=1):
        parts = line.split()
        if len(parts) != n:
            raise ValueError(f"row {i} has {len(parts)} entries, expected {n}")
        try:
            rows.append([Fraction(p) for p in parts])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"row {i}: {exc}") from None
    return RationalMatrix.from_rows(rows)


def format_matrix(a: RationalMatrix) -> str:
    lines = [str(a.n)]
    for row in a.entries:
        lines.append(" ".join(str(e) for e in row))
    return "\n".join(lines) + "\n"
