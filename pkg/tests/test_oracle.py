import ast
import itertools
from pathlib import Path

import pytest

import durrmeyer.oracle as oracle_mod
from durrmeyer.kernels import kernel_direct
from durrmeyer.oracle import CompositionRequest, compose, compose_exact, compose_numeric
from durrmeyer.poly import BivariatePoly
from durrmeyer.smd_ops import kernel_bessel

CLOSED_FORM_MODULES = {"bd_ops", "smd_ops", "durrmeyer.bd_ops", "durrmeyer.smd_ops"}


def imported_modules(path):
    tree = ast.parse(Path(path).read_text())
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            yield (node.module or "")
        elif isinstance(node, ast.Import):
            for alias in node.names:
                yield alias.name


@pytest.mark.parametrize("module", ["oracle", "kernels", "quadrature", "poly", "exact_core"])
def test_oracle_path_never_imports_closed_forms(module):
    path = Path(oracle_mod.__file__).with_name(f"{module}.py")
    assert not set(imported_modules(path)) & CLOSED_FORM_MODULES


def test_compose_exact_base_and_pair():
    for n in range(5):
        assert compose_exact([n]) == kernel_direct(n).kernel
    assert compose_exact([1, 1]) == BivariatePoly.from_dict(
        {(0, 0): "4/3", (1, 0): "-2/3", (0, 1): "-2/3", (1, 1): "4/3"}
    )


@pytest.mark.parametrize("orders", [[1, 2], [0, 3], [2, 3, 1], [1, 2, 1, 3], [4, 2, 3]])
def test_compose_exact_is_commutative(orders):
    assert compose_exact(orders) == compose_exact(orders[::-1])
    assert all(compose_exact(list(p)) == compose_exact(orders) for p in itertools.permutations(orders))


def test_compose_numeric_examples():
    assert compose_numeric([2.0], 0.3, 0.9) == pytest.approx(kernel_bessel(2.0, 0.3, 0.9), rel=1e-13)
    assert compose_numeric([2, 2], 0.0, 0.0) == pytest.approx(1.0, abs=1e-8)
    assert compose_numeric([1, 2, 3], 0.5, 0.5) == pytest.approx(kernel_bessel(6 / 11, 0.5, 0.5), abs=1e-7)


def test_four_fold_numeric_composition():
    orders = [1, 2, 3, 4]
    target = 1 / sum(1 / n for n in orders)
    assert compose_numeric(orders, 0.4, 0.7) == pytest.approx(kernel_bessel(target, 0.4, 0.7), abs=1e-7)


def test_request_validation_and_dispatch():
    req = CompositionRequest("bernstein_durrmeyer", [1, 1], "exact")
    assert compose(req) == compose_exact([1, 1])
    num = CompositionRequest("szasz_durrmeyer", [2.0, 2.0], "numeric")
    assert compose(num, 0.0, 0.0) == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValueError):
        compose(num)
    with pytest.raises(ValueError):
        CompositionRequest("bernstein_durrmeyer", [1.5], "exact")
    with pytest.raises(ValueError):
        CompositionRequest("bernstein_durrmeyer", [1], "numeric")
    with pytest.raises(ValueError):
        CompositionRequest("szasz_durrmeyer", [0.0, 1.0], "numeric")
    with pytest.raises(ValueError):
        CompositionRequest("other", [1], "exact")
    with pytest.raises(ValueError):
        compose_exact([])
