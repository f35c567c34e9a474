"""Exact polynomials over the rationals on [0, 1].

``Poly`` is univariate, ``BivariatePoly`` holds polynomials in ``(x, y)``.
Both are immutable, stored densely in the monomial basis and trimmed so that
equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import IndexOutOfRange
from .exact_core import as_rational, binomial

__all__ = [
    "BivariatePoly",
    "LegendreUnnormalized",
    "Poly",
    "bernstein_basis",
    "bivar_partial_integral",
    "inner_product",
    "integrate01",
    "legendre_rodrigues",
    "legendre_unnormalized",
    "verify_partition_of_unity",
    "verify_product_formula",
]


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Univariate polynomial; ``coeffs[i]`` multiplies ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim([as_rational(c) for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "Poly":
        return cls([0] * power + [coeff])

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim([Fraction(other)])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else f"{c}*x^{i}" if i > 1 else f"{c}*x")
        return " + ".join(terms)

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        acc = 0 if not isinstance(x, Fraction) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else float(c))
        return acc

    def derivative(self, order: int = 1) -> "Poly":
        c = list(self.coeffs)
        for _ in range(order):
            c = [i * a for i, a in enumerate(c)][1:]
        return Poly(c)

    def integral01(self) -> Fraction:
        return sum((c / (i + 1) for i, c in enumerate(self.coeffs)), Fraction(0))


def _as_poly(value):
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Poly([value])
    return None


class BivariatePoly:
    """Polynomial in ``(x, y)``; ``coeffs[i][j]`` multiplies ``x**i * y**j``.

    Trailing all-zero rows and columns are trimmed, so the stored array is the
    smallest rectangle holding every nonzero coefficient.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Iterable] = ()):
        rows = [[as_rational(c) for c in row] for row in coeffs]
        width = max((len(r) for r in rows), default=0)
        rows = [r + [Fraction(0)] * (width - len(r)) for r in rows]
        while rows and not any(rows[-1]):
            rows.pop()
        while width and not any(r[width - 1] for r in rows):
            width -= 1
        object.__setattr__(self, "coeffs", tuple(tuple(r[:width]) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("BivariatePoly is immutable")

    @classmethod
    def constant(cls, c) -> "BivariatePoly":
        return cls([[c]])

    @classmethod
    def outer(cls, px: Poly, qy: Poly) -> "BivariatePoly":
        """The product ``px(x) * qy(y)``."""
        return cls([[a * b for b in qy.coeffs] for a in px.coeffs])

    @classmethod
    def from_dict(cls, terms: dict) -> "BivariatePoly":
        """Build from ``{(i, j): coeff}``."""
        if not terms:
            return cls()
        nx = max(i for i, _ in terms) + 1
        ny = max(j for _, j in terms) + 1
        rows = [[Fraction(0)] * ny for _ in range(nx)]
        for (i, j), c in terms.items():
            rows[i][j] += as_rational(c)
        return cls(rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.coeffs), (len(self.coeffs[0]) if self.coeffs else 0)

    @property
    def degrees(self) -> tuple[int, int]:
        """Degrees in ``x`` and ``y``; ``(-1, -1)`` for the zero polynomial."""
        nx, ny = self.shape
        return nx - 1, ny - 1

    def coefficient(self, i: int, j: int) -> Fraction:
        nx, ny = self.shape
        if 0 <= i < nx and 0 <= j < ny:
            return self.coeffs[i][j]
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, BivariatePoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == BivariatePoly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "BivariatePoly(" + repr([[str(c) for c in r] for r in self.coeffs]) + ")"

    def __str__(self):
        terms = []
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c:
                    mono = "*".join(
                        s for s in (
                            f"x^{i}" if i > 1 else "x" if i else "",
                            f"y^{j}" if j > 1 else "y" if j else "",
                        ) if s
                    )
                    terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms) or "0"

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = BivariatePoly.constant(other)
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        nx = max(self.shape[0], other.shape[0])
        ny = max(self.shape[1], other.shape[1])
        return BivariatePoly(
            [[self.coefficient(i, j) + other.coefficient(i, j) for j in range(ny)] for i in range(nx)]
        )

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly([[-c for c in r] for r in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return BivariatePoly([[c * other for c in r] for r in self.coeffs])
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return BivariatePoly()
        (ax, ay), (bx, by) = self.shape, other.shape
        out = [[Fraction(0)] * (ay + by - 1) for _ in range(ax + bx - 1)]
        for i, ra in enumerate(self.coeffs):
            for j, a in enumerate(ra):
                if a:
                    for k, rb in enumerate(other.coeffs):
                        for l, b in enumerate(rb):
                            if b:
                                out[i + k][j + l] += a * b
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __call__(self, x, y):
        total = 0
        for row in reversed(self.coeffs):
            inner = 0
            for c in reversed(row):
                inner = inner * y + (c if isinstance(y, (int, Fraction)) else float(c))
            total = total * x + inner
        return total

    def transpose(self) -> "BivariatePoly":
        """Swap the roles of ``x`` and ``y``."""
        nx, ny = self.shape
        return BivariatePoly([[self.coeffs[i][j] for i in range(nx)] for j in range(ny)])

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def integrate_y(self) -> Poly:
        """``x -> integral over [0, 1] of K(x, y) dy``."""
        return Poly([sum((c / (j + 1) for j, c in enumerate(row)), Fraction(0)) for row in self.coeffs])

    def integrate_x(self) -> Poly:
        """``y -> integral over [0, 1] of K(x, y) dx``, as a Poly in ``y``."""
        return self.transpose().integrate_y()

    def integral01(self) -> Fraction:
        return self.integrate_y().integral01()

    def apply_to(self, f: Poly) -> Poly:
        """Image of ``f`` under the integral operator with this kernel.

        Returns ``x -> integral over [0, 1] of f(y) K(x, y) dy``.
        """
        moments = [
            sum((c / (k + j + 1) for k, c in enumerate(f.coeffs)), Fraction(0))
            for j in range(self.shape[1])
        ]
        return Poly([sum((a * m for a, m in zip(row, moments)), Fraction(0)) for row in self.coeffs])


def bivar_partial_integral(a: BivariatePoly, b: BivariatePoly) -> BivariatePoly:
    """Return ``C(x, y) = integral over [0, 1] of A(x, t) * B(t, y) dt``.

    ``a`` is read as a polynomial in ``(x, t)`` and ``b`` in ``(t, y)``. With
    ``H[s][t] = 1/(s+t+1)`` (the moments of the monomials) the result is the
    matrix product ``A @ H @ B`` of coefficient arrays.
    """
    if a.is_zero() or b.is_zero():
        return BivariatePoly()
    (ax, at), (bt, by) = a.shape, b.shape
    # HB[s][j] = sum_t B[t][j] / (s + t + 1)
    hb = [
        [sum((b.coeffs[t][j] / (s + t + 1) for t in range(bt) if b.coeffs[t][j]), Fraction(0)) for j in range(by)]
        for s in range(at)
    ]
    out = [
        [sum((row[s] * hb[s][j] for s in range(at) if row[s]), Fraction(0)) for j in range(by)]
        for row in a.coeffs
    ]
    return BivariatePoly(out)


_BERNSTEIN_CACHE: dict[tuple[int, int], Poly] = {}


def bernstein_basis(n: int, k: int) -> Poly:
    """``p_{n,k}(x) = C(n,k) x^k (1-x)^(n-k)`` expanded in monomials."""
    if n < 0 or k < 0 or k > n:
        raise IndexOutOfRange(f"Bernstein index ({n}, {k}) out of range")
    key = (n, k)
    p = _BERNSTEIN_CACHE.get(key)
    if p is None:
        # (1-x)^(n-k) = sum_i (-1)^i C(n-k, i) x^i
        c = [Fraction(0)] * k + [
            binomial(n, k) * (-1) ** i * binomial(n - k, i) for i in range(n - k + 1)
        ]
        p = _BERNSTEIN_CACHE[key] = Poly(c)
    return p


def integrate01(f: Poly) -> Fraction:
    """Exact integral of ``f`` over [0, 1]."""
    return f.integral01()


def inner_product(f: Poly, g: Poly) -> Fraction:
    return integrate01(f * g)


@dataclass(frozen=True)
class LegendreUnnormalized:
    """Shifted Legendre polynomial on [0, 1] with squared norm ``1/(2k+1)``.

    The orthonormal eigenfunction of the Bernstein-Durrmeyer operators is
    ``sqrt(2k+1) * poly``; products ``Q_k(x) Q_k(y)`` are handled as
    ``(2k+1) * poly(x) * poly(y)`` so no irrational ever appears.
    """

    k: int
    poly: Poly

    @property
    def squared_norm(self) -> Fraction:
        return Fraction(1, 2 * self.k + 1)


def legendre_unnormalized(k: int) -> LegendreUnnormalized:
    """``sum_j (-1)^j C(k,j) p_{k,j}(x)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    p = Poly()
    for j in range(k + 1):
        p = p + bernstein_basis(k, j) * ((-1) ** j * binomial(k, j))
    return LegendreUnnormalized(k, p)


def legendre_rodrigues(k: int) -> Poly:
    """``(1/k!) d^k/dx^k [x^k (1-x)^k]``, computed by repeated differentiation."""
    if k < 0:
        raise ValueError("k must be non-negative")
    base = (Poly([0, 1]) * Poly([1, -1])) ** k
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return base.derivative(k) * Fraction(1, fact)


def verify_partition_of_unity(n: int) -> bool:
    total = Poly()
    for k in range(n + 1):
        total = total + bernstein_basis(n, k)
    return total == Poly([1])


def verify_product_formula(m: int, mu: int, n: int, nu: int) -> bool:
    """Check ``p_{m,mu} p_{n,nu} == C(m,mu)C(n,nu)/C(m+n,mu+nu) p_{m+n,mu+nu}``."""
    lhs = bernstein_basis(m, mu) * bernstein_basis(n, nu)
    ratio = binomial(m, mu) * binomial(n, nu) / binomial(m + n, mu + nu)
    return lhs == bernstein_basis(m + n, mu + nu) * ratio
