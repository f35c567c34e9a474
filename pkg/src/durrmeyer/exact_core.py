"""Exact rational scalars, combinatorial primitives and dense rational matrices.

Rationals are :class:`fractions.Fraction`, which is always kept in lowest terms
with a positive denominator, so equality of values is equality of canonical
forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import ShapeMismatch, ZeroDiagonal

Rational = Fraction

__all__ = [
    "Rational",
    "RationalMatrix",
    "as_rational",
    "binomial",
    "determinant",
    "falling_factorial",
    "mat_mul",
    "solve_upper_triangular",
]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: silently converting one would smuggle a rounding
    error into an exact computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def falling_factorial(z, r: int) -> Fraction:
    """Return ``z (z-1) ... (z-r+1)``; the empty product (``r == 0``) is 1."""
    if r < 0:
        raise ValueError("r must be non-negative")
    z = as_rational(z)
    out = Fraction(1)
    for i in range(r):
        out *= z - i
        if not out:
            break
    return out


def binomial(n: int, k: int) -> Fraction:
    """``C(n, k)`` as a Fraction, zero outside ``0 <= k <= n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 0 or k > n:
        return Fraction(0)
    return Fraction(comb(n, k))


@dataclass(frozen=True)
class RationalMatrix:
    """Dense row-major matrix of Fractions.

    ``upper_triangular=True`` is a checked assertion: construction fails if any
    entry below the diagonal is nonzero.
    """

    rows: int
    cols: int
    entries: tuple[Fraction, ...]
    upper_triangular: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatch("negative matrix dimension")
        entries = tuple(as_rational(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{len(entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        object.__setattr__(self, "entries", entries)
        if self.upper_triangular:
            for i in range(self.rows):
                for j in range(min(i, self.cols)):
                    if entries[i * self.cols + j]:
                        raise ValueError(
                            f"entry ({i},{j}) below the diagonal is nonzero"
                        )

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], upper_triangular: bool = False) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("ragged rows")
        flat = [e for r in rows for e in r]
        return cls(len(rows), ncols, tuple(flat), upper_triangular)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        flat = [Fraction(int(i == j)) for i in range(n) for j in range(n)]
        return cls(n, n, tuple(flat), upper_triangular=True)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(index)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_upper_triangular(self) -> bool:
        return all(
            not self[i, j] for i in range(self.rows) for j in range(min(i, self.cols))
        )

    def matvec(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise ShapeMismatch(f"vector of length {len(v)} for {self.cols} columns")
        v = [as_rational(e) for e in v]
        return [sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows)]

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return mat_mul(self, other)

    def __str__(self) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(str(e) for e in self.row(i)) + "]" for i in range(self.rows)
        ) + "]"


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bcols = [[b[k, j] for k in range(b.rows)] for j in range(b.cols)]
    flat = []
    for i in range(a.rows):
        arow = a.row(i)
        for col in bcols:
            flat.append(sum((x * y for x, y in zip(arow, col) if x and y), Fraction(0)))
    return RationalMatrix(
        a.rows, b.cols, tuple(flat),
        upper_triangular=a.upper_triangular and b.upper_triangular,
    )


def solve_upper_triangular(a: RationalMatrix, b: Sequence) -> list[Fraction]:
    """Back substitution for ``a @ x == b`` with ``a`` square upper triangular."""
    if not a.is_square:
        raise ShapeMismatch(f"matrix is {a.rows}x{a.cols}, not square")
    if len(b) != a.rows:
        raise ShapeMismatch(f"right-hand side has length {len(b)}, expected {a.rows}")
    if not a.upper_triangular and not a.is_upper_triangular():
        raise ValueError("matrix is not upper triangular")
    n = a.rows
    for i in range(n):
        if not a[i, i]:
            raise ZeroDiagonal(f"diagonal entry {i} is zero")
    b = [as_rational(e) for e in b]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = b[i] - sum((a[i, k] * x[k] for k in range(i + 1, n)), Fraction(0))
        x[i] = s / a[i, i]
    return x


def determinant(a: RationalMatrix) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals."""
    if not a.is_square:
        raise ShapeMismatch(f"matrix is {a.rows}x{a.cols}, not square")
    n = a.rows
    m = a.to_rows()
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det
