"""Bernstein-Durrmeyer operators: kernels, eigenstructure and composition formulas.

Every kernel is an exact :class:`~durrmeyer.poly.BivariatePoly`. Composition
orders are always listed outermost first, ``(n_r, ..., n_1)`` for
``M_{n_r} o ... o M_{n_1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import NamedTuple, Sequence

from .errors import IndexOutOfRange
from .exact_core import (
    RationalMatrix,
    binomial,
    falling_factorial,
    solve_upper_triangular,
)
from .kernels import BDKernel, kernel_direct
from .oracle import compose_exact
from .poly import BivariatePoly, Poly, bernstein_basis, legendre_unnormalized

__all__ = [
    "BDKernel",
    "CompositionCoefficients",
    "IterateResult",
    "apply",
    "composition_coefficients",
    "eigenvalue",
    "iterate_apply",
    "iterate_paths",
    "kernel_direct",
    "kernel_eigen_expansion",
    "kernel_general_closed",
    "kernel_pair_closed",
    "kernel_r_fold_product_form",
    "kernel_triple_closed",
    "matrix_A",
    "matrix_A_determinant_closed",
    "matrix_A_inverse_closed",
    "verify_commutativity",
]


def _check_orders(orders) -> tuple[int, ...]:
    orders = tuple(orders)
    if not orders:
        raise ValueError("orders must be nonempty")
    for n in orders:
        if isinstance(n, bool) or int(n) != n or n < 0:
            raise ValueError(f"orders must be non-negative integers, got {n!r}")
    return tuple(int(n) for n in orders)


def _diagonal_sum(k: int) -> BivariatePoly:
    """``sum_l p_{k,l}(x) p_{k,l}(y)``."""
    out = BivariatePoly()
    for l in range(k + 1):
        p = bernstein_basis(k, l)
        out = out + BivariatePoly.outer(p, p)
    return out


def apply(n: int, f: Poly) -> Poly:
    """``(M_n f)(x) = (n+1) sum_k p_{n,k}(x) * integral f p_{n,k}``."""
    if n < 0:
        raise ValueError("order must be non-negative")
    out = Poly()
    for k in range(n + 1):
        p = bernstein_basis(n, k)
        out = out + p * (f * p).integral01()
    return out * (n + 1)


def eigenvalue(n: int, k: int) -> Fraction:
    """Eigenvalue of ``M_n`` for the degree-``k`` Legendre polynomial."""
    if n < 0 or k < 0 or k > n:
        raise IndexOutOfRange(f"eigenvalue index ({n}, {k}) out of range")
    return falling_factorial(n, k) / falling_factorial(n + k + 1, k)


def kernel_pair_closed(m: int, n: int) -> BDKernel:
    """Kernel of ``M_m o M_n`` as a positive combination of diagonal Bernstein products."""
    m, n = _check_orders((m, n))
    pref = Fraction(factorial(m + 1) * factorial(n + 1), factorial(m + n + 1))
    k_sum = BivariatePoly()
    for k in range(min(m, n) + 1):
        k_sum = k_sum + _diagonal_sum(k) * (binomial(m, k) * binomial(n, k))
    return BDKernel((m, n), k_sum * pref, "pair_closed")


def kernel_triple_closed(n3: int, n2: int, n1: int) -> BDKernel:
    n3, n2, n1 = _check_orders((n3, n2, n1))
    total = n1 + n2 + n3
    pref = Fraction(
        factorial(n3 + 1) * factorial(n2 + 1) * factorial(n1 + 1) * factorial(total + 1),
        factorial(n3 + n2 + 1) * factorial(n3 + n1 + 1) * factorial(n2 + n1 + 1),
    )
    k_sum = BivariatePoly()
    for k in range(min(n1, n2, n3) + 1):
        w = binomial(n3, k) * binomial(n2, k) * binomial(n1, k) / binomial(total + 1, k)
        k_sum = k_sum + _diagonal_sum(k) * w
    return BDKernel((n3, n2, n1), k_sum * pref, "triple_closed")


def kernel_eigen_expansion(m: int, n: int) -> BDKernel:
    """``sum_k lambda_{m,k} lambda_{n,k} (2k+1) L_k(x) L_k(y)``."""
    m, n = _check_orders((m, n))
    out = BivariatePoly()
    for k in range(min(m, n) + 1):
        lk = legendre_unnormalized(k).poly
        out = out + BivariatePoly.outer(lk, lk) * (eigenvalue(m, k) * eigenvalue(n, k) * (2 * k + 1))
    return BDKernel((m, n), out, "eigen_expansion")


def kernel_r_fold_product_form(orders: Sequence[int]) -> BDKernel:
    """Kernel from the nested sum over ``k_1, ..., k_r`` of Bernstein monomials.

    With ``orders = (n_r, ..., n_1)`` the weight of
    ``y^{k_1} (1-y)^{n_1-k_1} x^{k_r} (1-x)^{n_r-k_r}`` is
    ``prod_i C(n_i,k_i)^2 * prod_{i<r} C(n_i+n_{i+1}, k_i+k_{i+1})^{-1}``
    summed over the interior indices, times
    ``(n_r+1) prod_{i<r} (n_i+1)/(n_i+n_{i+1}+1)``. The interior sums are
    evaluated as a chain of transfer matrices.
    """
    orders = _check_orders(orders)
    ns = orders[::-1]  # ns[0] = n_1 (acts on f), ns[-1] = n_r
    r = len(ns)
    pref = Fraction(ns[-1] + 1)
    for i in range(r - 1):
        pref *= Fraction(ns[i] + 1, ns[i] + ns[i + 1] + 1)

    # w[k_1][k_i]: accumulated weight with the first i factors C(n_j,k_j)^2 included
    w = [[binomial(ns[0], a) ** 2 if a == b else Fraction(0) for b in range(ns[0] + 1)] for a in range(ns[0] + 1)]
    for i in range(1, r):
        n_prev, n_cur = ns[i - 1], ns[i]
        new = []
        for row in w:
            new_row = []
            for b in range(n_cur + 1):
                s = sum(
                    (row[a] / binomial(n_prev + n_cur, a + b) for a in range(n_prev + 1) if row[a]),
                    Fraction(0),
                )
                new_row.append(s * binomial(n_cur, b) ** 2)
            new.append(new_row)
        w = new

    one_minus = Poly([1, -1])
    x_basis = [Poly.monomial(b) * one_minus ** (ns[-1] - b) for b in range(ns[-1] + 1)]
    y_basis = [Poly.monomial(a) * one_minus ** (ns[0] - a) for a in range(ns[0] + 1)]
    out = BivariatePoly()
    for a, row in enumerate(w):
        for b, weight in enumerate(row):
            if weight:
                out = out + BivariatePoly.outer(x_basis[b], y_basis[a]) * weight
    return BDKernel(orders, out * pref, "r_fold_product")


def matrix_A(n: int) -> RationalMatrix:
    """``(n+1) x (n+1)`` matrix with entry ``(j, k) = k^(j falling) / (k+j+1)^(j falling)``.

    Column ``k`` lists the eigenvalues of ``M_k``, so the matrix is upper triangular.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    rows = [
        [falling_factorial(k, j) / falling_factorial(k + j + 1, j) for k in range(n + 1)]
        for j in range(n + 1)
    ]
    return RationalMatrix.from_rows(rows, upper_triangular=True)


def matrix_A_inverse_closed(n: int) -> RationalMatrix:
    if n < 0:
        raise ValueError("n must be non-negative")
    rows = [
        [
            (-1 if (k - l) % 2 else 1) * Fraction(2 * l + 1, k + 1) * binomial(k + l, l) * binomial(l, k)
            for l in range(n + 1)
        ]
        for k in range(n + 1)
    ]
    return RationalMatrix.from_rows(rows, upper_triangular=True)


def matrix_A_determinant_closed(n: int) -> Fraction:
    """``prod_{k<=n} 1 / C(2k+1, k)``."""
    out = Fraction(1)
    for k in range(n + 1):
        out /= binomial(2 * k + 1, k)
    return out


@dataclass(frozen=True)
class CompositionCoefficients:
    """Weights ``c`` with ``M_{n_r} o ... o M_{n_1} = sum_k c_k M_k``."""

    orders: tuple[int, ...]
    n: int
    c: tuple[Fraction, ...]
    rhs: tuple[Fraction, ...]

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)


def composition_coefficients(orders: Sequence[int]) -> CompositionCoefficients:
    """Solve ``A_n c = rhs`` with ``rhs_j = prod_i lambda_{n_i, j}`` and ``n = min(orders)``.

    The solution is computed by back substitution and again through the
    closed-form inverse; the two must agree exactly.
    """
    orders = _check_orders(orders)
    n = min(orders)
    rhs = []
    for j in range(n + 1):
        v = Fraction(1)
        for ni in orders:
            v *= eigenvalue(ni, j)
        rhs.append(v)
    c = solve_upper_triangular(matrix_A(n), rhs)
    via_inverse = matrix_A_inverse_closed(n).matvec(rhs)
    if c != via_inverse:
        raise ArithmeticError(f"back substitution and closed-form inverse disagree for {orders}")
    return CompositionCoefficients(orders, n, tuple(c), tuple(rhs))


def kernel_general_closed(orders: Sequence[int]) -> BDKernel:
    """``sum_k c_k (k+1) sum_l p_{k,l}(x) p_{k,l}(y)``, i.e. ``sum_k c_k K_k``."""
    coeffs = composition_coefficients(orders)
    out = BivariatePoly()
    for k, ck in enumerate(coeffs.c):
        if ck:
            out = out + kernel_direct(k).kernel * ck
    return BDKernel(coeffs.orders, out, "general_closed")


class IterateResult(NamedTuple):
    iterated: Poly
    decomposed: Poly
    coefficients: CompositionCoefficients


def iterate_paths(n: int, r: int, f: Poly) -> IterateResult:
    """``M_n^r f`` computed by repeated application and as ``sum_k c_k M_k f``."""
    if r < 1:
        raise ValueError("r must be >= 1")
    g = f
    for _ in range(r):
        g = apply(n, g)
    coeffs = composition_coefficients([n] * r)
    decomposed = Poly()
    for k, ck in enumerate(coeffs.c):
        if ck:
            decomposed = decomposed + apply(k, f) * ck
    return IterateResult(g, decomposed, coeffs)


def iterate_apply(n: int, r: int, f: Poly) -> Poly:
    """``M_n^r f``; raises if the two evaluation paths of :func:`iterate_paths` differ."""
    res = iterate_paths(n, r, f)
    if res.iterated != res.decomposed:
        raise ArithmeticError(f"iterate decomposition failed for n={n}, r={r}")
    return res.iterated


def verify_commutativity(m: int, n: int) -> bool:
    return compose_exact([m, n]) == compose_exact([n, m])
