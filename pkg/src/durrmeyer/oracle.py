"""Brute-force composition engines used as ground truth.

This module must only build on the definitional kernels in
:mod:`durrmeyer.kernels`, exact integration in :mod:`durrmeyer.poly` and the
quadrature engine. It never imports a closed-form kernel; a test enforces it.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Integral, Real
from typing import Sequence

from .kernels import BDKernel, kernel_direct
from .poly import BivariatePoly, bivar_partial_integral
from .quadrature import QuadratureSpec, compose_on_points

__all__ = ["CompositionRequest", "compose", "compose_exact", "compose_numeric"]

FAMILIES = ("bernstein_durrmeyer", "szasz_durrmeyer")


def compose_exact(orders: Sequence[int]) -> BivariatePoly:
    """Kernel of ``M_{n_r} o ... o M_{n_1}`` by exact nested integration.

    ``orders`` is outermost first. Starting from ``K_{n_1}``, each step forms
    ``integral K_{n_i}(x, t) K_prev(t, y) dt``.
    """
    orders = list(orders)
    if not orders:
        raise ValueError("orders must be nonempty")
    k = kernel_direct(orders[-1]).kernel
    for n in reversed(orders[:-1]):
        k = bivar_partial_integral(kernel_direct(n).kernel, k)
    return k


def compose_exact_kernel(orders: Sequence[int]) -> BDKernel:
    return BDKernel(tuple(orders), compose_exact(orders), "oracle")


def compose_numeric(orders: Sequence[float], x: float, y: float, tol: float = 1e-9) -> float:
    """Kernel of ``S_{n_r} o ... o S_{n_1}`` at ``(x, y)`` by nested quadrature.

    The tolerance is split across the nesting depth, ``tol / (2 r)`` per level.
    """
    orders = list(orders)
    if not orders:
        raise ValueError("orders must be nonempty")
    spec = QuadratureSpec(tol=tol / (2 * len(orders)))
    values, _, _ = compose_on_points(orders, [x], [y], spec)
    return float(values[0])


@dataclass(frozen=True)
class CompositionRequest:
    family: str
    orders: tuple
    mode: str

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not self.orders:
            raise ValueError("orders must be nonempty")
        if self.family == "bernstein_durrmeyer":
            if self.mode != "exact":
                raise ValueError("Bernstein-Durrmeyer compositions are computed exactly")
            if not all(isinstance(n, Integral) and n >= 0 for n in self.orders):
                raise ValueError("Bernstein-Durrmeyer orders must be non-negative integers")
        else:
            if self.mode != "numeric":
                raise ValueError("Szasz-Mirakjan-Durrmeyer compositions are computed numerically")
            if not all(isinstance(n, Real) and n > 0 for n in self.orders):
                raise ValueError("Szasz-Mirakjan-Durrmeyer orders must be positive reals")


def compose(request: CompositionRequest, x: float | None = None, y: float | None = None, tol: float = 1e-9):
    """Dispatch a request: a :class:`BivariatePoly` for exact mode, a float otherwise."""
    if request.mode == "exact":
        return compose_exact(request.orders)
    if x is None or y is None:
        raise ValueError("numeric composition needs a point (x, y)")
    return compose_numeric(request.orders, x, y, tol)
