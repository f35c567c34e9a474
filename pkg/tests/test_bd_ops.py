import itertools
from fractions import Fraction

import pytest
import sympy as sp

from durrmeyer import bd_ops
from durrmeyer.errors import IndexOutOfRange
from durrmeyer.exact_core import RationalMatrix, determinant, mat_mul
from durrmeyer.oracle import compose_exact
from durrmeyer.poly import BivariatePoly, Poly, legendre_unnormalized

F = Fraction
X, Y, T = sp.symbols("x y t")

# (2/3)[1 + (1-x)(1-y) + xy] expanded
K11 = BivariatePoly([[F(4, 3), F(-2, 3)], [F(-2, 3), F(4, 3)]])


def sympy_kernel(n, a=X, b=Y):
    return (n + 1) * sum(
        sp.binomial(n, k) ** 2 * a**k * (1 - a) ** (n - k) * b**k * (1 - b) ** (n - k) for k in range(n + 1)
    )


def sympy_compose(orders):
    """Nested symbolic integration, outermost order first."""
    k = sympy_kernel(orders[-1], X, Y)
    for n in reversed(orders[:-1]):
        k = sp.integrate(sp.expand(sympy_kernel(n, X, T) * k.subs(X, T)), (T, 0, 1))
    return sp.expand(k)


def to_bivariate(expr):
    poly = sp.Poly(sp.expand(expr), X, Y)
    return BivariatePoly.from_dict({m: F(int(c.p), int(c.q)) for m, c in poly.terms()})


def test_kernel_direct_examples():
    assert bd_ops.kernel_direct(0).kernel == BivariatePoly.constant(1)
    assert bd_ops.kernel_direct(1).kernel == to_bivariate(2 * ((1 - X) * (1 - Y) + X * Y))
    k2 = bd_ops.kernel_direct(2)
    assert k2.kernel.degrees == (2, 2)
    assert k2.is_symmetric() and k2.kernel.integral01() == 1 and k2.conserves_mass()


@pytest.mark.parametrize("orders", [[1, 1], [2, 1], [1, 2, 3], [3, 1, 2], [2, 2, 1, 3]])
def test_exact_oracle_matches_sympy(orders):
    assert compose_exact(orders) == to_bivariate(sympy_compose(orders))


def test_apply_examples():
    for n in range(5):
        assert bd_ops.apply(n, Poly([1])) == Poly([1])
    assert bd_ops.apply(1, Poly([0, 1])) == Poly([F(1, 3), F(1, 3)])
    l2 = legendre_unnormalized(2).poly
    assert bd_ops.apply(3, l2) == l2 * F(1, 5)


def test_apply_agrees_with_kernel_integration():
    f = Poly([F(1, 2), -3, 0, 7])
    for n in range(6):
        assert bd_ops.apply(n, f) == bd_ops.kernel_direct(n).apply(f)


def test_eigenvalue_examples():
    assert bd_ops.eigenvalue(4, 0) == 1
    assert bd_ops.eigenvalue(1, 1) == F(1, 3)
    assert bd_ops.eigenvalue(3, 2) == F(6, 30) == F(1, 5)
    with pytest.raises(IndexOutOfRange):
        bd_ops.eigenvalue(2, 3)


@pytest.mark.parametrize("n", range(11))
def test_eigen_relation(n):
    for k in range(n + 1):
        lk = legendre_unnormalized(k).poly
        lam = bd_ops.eigenvalue(n, k)
        assert 0 < lam <= 1
        assert bd_ops.apply(n, lk) == lk * lam


def test_pair_closed_examples():
    for n in range(5):
        assert bd_ops.kernel_pair_closed(0, n).kernel == BivariatePoly.constant(1)
    assert bd_ops.kernel_pair_closed(1, 1).kernel == K11
    assert bd_ops.kernel_pair_closed(2, 1).kernel == compose_exact([2, 1])


@pytest.mark.parametrize("m, n", list(itertools.product(range(7), repeat=2)))
def test_pair_five_way_agreement(m, n):
    oracle = compose_exact([m, n])
    reps = [
        bd_ops.kernel_pair_closed(m, n),
        bd_ops.kernel_eigen_expansion(m, n),
        bd_ops.kernel_general_closed([m, n]),
        bd_ops.kernel_r_fold_product_form([m, n]),
    ]
    for rep in reps:
        assert rep.kernel == oracle, rep.provenance
        assert rep.conserves_mass()
        assert rep.is_symmetric()


def test_triple_closed_examples():
    assert bd_ops.kernel_triple_closed(0, 3, 2).kernel == BivariatePoly.constant(1)
    assert bd_ops.kernel_triple_closed(1, 1, 1).kernel == compose_exact([1, 1, 1])
    k = bd_ops.kernel_triple_closed(2, 1, 3).kernel
    assert k == compose_exact([2, 1, 3])
    assert all(bd_ops.kernel_triple_closed(*p).kernel == k for p in itertools.permutations((1, 2, 3)))


@pytest.mark.parametrize("triple", list(itertools.product(range(5), repeat=3)))
def test_triple_agreement(triple):
    oracle = compose_exact(list(triple))
    assert bd_ops.kernel_triple_closed(*triple).kernel == oracle
    assert bd_ops.kernel_general_closed(triple).kernel == oracle
    assert bd_ops.kernel_r_fold_product_form(triple).kernel == oracle


def test_matrix_A_examples():
    assert bd_ops.matrix_A(0) == RationalMatrix.from_rows([[1]])
    assert bd_ops.matrix_A(1) == RationalMatrix.from_rows([[1, 1], [0, F(1, 3)]])
    assert determinant(bd_ops.matrix_A(2)) == F(1, 30)
    assert bd_ops.matrix_A_inverse_closed(0) == RationalMatrix.from_rows([[1]])
    assert bd_ops.matrix_A_inverse_closed(1) == RationalMatrix.from_rows([[1, -3], [0, 3]])


def test_matrix_A_columns_are_eigenvalues():
    a = bd_ops.matrix_A(6)
    for k in range(7):
        for j in range(7):
            assert a[j, k] == (bd_ops.eigenvalue(k, j) if j <= k else 0)


@pytest.mark.parametrize("n", range(13))
def test_matrix_inverse_and_determinant(n):
    a = bd_ops.matrix_A(n)
    assert mat_mul(a, bd_ops.matrix_A_inverse_closed(n)) == RationalMatrix.identity(n + 1)
    assert determinant(a) == bd_ops.matrix_A_determinant_closed(n)


def test_composition_coefficient_examples():
    assert bd_ops.composition_coefficients([4]).c == (0, 0, 0, 0, 1)
    assert bd_ops.composition_coefficients([1, 1]).c == (F(2, 3), F(1, 3))
    assert bd_ops.kernel_general_closed([2, 3]).kernel == bd_ops.kernel_pair_closed(2, 3).kernel
    cc = bd_ops.composition_coefficients([0, 5, 2])
    assert cc.n == 0 and cc.c == (1,)


def test_composition_coefficients_satisfy_system():
    for orders in ([3, 2], [2, 3, 4, 5], [4, 4, 4]):
        cc = bd_ops.composition_coefficients(orders)
        assert bd_ops.matrix_A(cc.n).matvec(cc.c) == list(cc.rhs)


def test_pair_coefficients_match_theorem_form():
    # c_k = (m+1)!(n+1)!/(m+n+1)! * C(m,k) C(n,k) / (k+1)
    from math import comb, factorial

    for m, n in itertools.product(range(1, 7), repeat=2):
        pref = F(factorial(m + 1) * factorial(n + 1), factorial(m + n + 1))
        expected = tuple(pref * comb(m, k) * comb(n, k) / (k + 1) for k in range(min(m, n) + 1))
        assert bd_ops.composition_coefficients([m, n]).c == expected


def test_coefficients_nonnegative_for_two_and_three_factors():
    for r in (2, 3):
        for orders in itertools.product(range(7), repeat=r):
            assert all(c >= 0 for c in bd_ops.composition_coefficients(orders).c)


def test_general_closed_examples():
    for n in range(5):
        assert bd_ops.kernel_general_closed([n]).kernel == bd_ops.kernel_direct(n).kernel
    k = bd_ops.kernel_general_closed([1, 2, 1, 3])
    assert k.kernel == compose_exact([1, 2, 1, 3])
    assert k.conserves_mass()


def test_oracle_degree_is_bounded_by_min_order():
    assert compose_exact([3, 2, 4, 1]).degrees == (1, 1)
    assert compose_exact([3, 2, 4, 1]) == bd_ops.kernel_general_closed([3, 2, 4, 1]).kernel


def test_eigen_expansion_examples():
    assert bd_ops.kernel_eigen_expansion(0, 0).kernel == BivariatePoly.constant(1)
    assert bd_ops.kernel_eigen_expansion(1, 1).kernel == K11
    assert bd_ops.kernel_eigen_expansion(3, 5).kernel == bd_ops.kernel_pair_closed(3, 5).kernel


def test_r_fold_product_examples():
    for n in range(5):
        assert bd_ops.kernel_r_fold_product_form([n]).kernel == bd_ops.kernel_direct(n).kernel
    assert bd_ops.kernel_r_fold_product_form([1, 1]).kernel == K11
    assert bd_ops.kernel_r_fold_product_form([2, 3, 1]).kernel == bd_ops.kernel_triple_closed(2, 3, 1).kernel
    assert bd_ops.kernel_r_fold_product_form([2, 0, 3, 1]).kernel == BivariatePoly.constant(1)


def test_palindromic_orders_give_symmetric_kernels():
    for orders in ([1, 3, 1], [2, 4, 4, 2], [3, 1, 2, 1, 3]):
        assert compose_exact(orders).is_symmetric()


def test_iterate_examples():
    x = Poly([0, 1])
    f = Poly([1, -2, 5])
    for n in range(4):
        assert bd_ops.iterate_apply(n, 1, f) == bd_ops.apply(n, f)
    assert bd_ops.iterate_apply(1, 2, x) == Poly([F(4, 9), F(1, 9)])
    res = bd_ops.iterate_paths(2, 3, Poly([0, 0, 1]))
    assert res.iterated == res.decomposed
    assert len(res.coefficients) == 3


@pytest.mark.parametrize("m, n", [(3, 3), (2, 5), (0, 7), (6, 1)])
def test_commutativity(m, n):
    assert bd_ops.verify_commutativity(m, n)


def test_invalid_orders():
    with pytest.raises(ValueError):
        bd_ops.kernel_general_closed([])
    with pytest.raises(ValueError):
        bd_ops.kernel_pair_closed(-1, 2)
    with pytest.raises(ValueError):
        bd_ops.composition_coefficients([1.5, 2])
