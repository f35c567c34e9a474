"""Composite Gauss-Legendre quadrature on a truncated half line.

Integrals over ``[0, inf)`` are replaced by integrals over ``[0, T]`` split
into equal panels. An estimate is accepted once doubling ``T`` (and halving
the panel width) changes it by less than ``0.1 * tol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceFailure
from .kernels import smd_kernel_values

__all__ = [
    "QuadratureSpec",
    "composite_gauss_legendre",
    "compose_on_points",
    "integrate_half_line",
    "truncation_point",
]

# element budget for one block of the kernel matrix used by nested composition
_BLOCK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature controls.

    ``upper`` and ``panel_width`` override the automatic choices; the
    automatic truncation is ``x + y + (40 + 10 ln(1 + sum of orders)) / min order``.
    """

    tol: float = 1e-10
    nodes_per_panel: int = 16
    max_refinements: int = 4
    upper: float | None = None
    panel_width: float | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.nodes_per_panel < 1 or self.max_refinements < 1:
            raise ValueError("nodes_per_panel and max_refinements must be >= 1")


@lru_cache(maxsize=64)
def _gl_reference(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def composite_gauss_legendre(upper: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of ``panels`` equal Gauss-Legendre panels on ``[0, upper]``."""
    ref_x, ref_w = _gl_reference(order)
    h = upper / panels
    left = np.arange(panels) * h
    nodes = (left[:, None] + 0.5 * h * (ref_x[None, :] + 1.0)).ravel()
    weights = np.broadcast_to(0.5 * h * ref_w, (panels, order)).ravel().copy()
    return nodes, weights


def truncation_point(orders: Sequence[float], x: float = 0.0, y: float = 0.0) -> float:
    return x + y + (40.0 + 10.0 * math.log1p(sum(orders))) / min(orders)


def _refine(estimate: Callable[[float, float], np.ndarray], upper: float, width: float, spec: QuadratureSpec):
    prev = estimate(upper, width)
    for _ in range(spec.max_refinements):
        upper, width = 2.0 * upper, 0.5 * width
        cur = estimate(upper, width)
        if np.max(np.abs(cur - prev), initial=0.0) < 0.1 * spec.tol:
            return cur, upper
        prev = cur
    raise ConvergenceFailure(
        f"quadrature did not settle to {spec.tol:g} after {spec.max_refinements} refinements (T={upper:g})"
    )


def integrate_half_line(f: Callable[[np.ndarray], np.ndarray], upper: float, width: float,
                        spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Integrate a vectorised ``f`` over ``[0, inf)``; returns ``(value, T)``."""
    spec = spec or QuadratureSpec()

    def estimate(T, h):
        nodes, weights = composite_gauss_legendre(T, max(1, math.ceil(T / h)), spec.nodes_per_panel)
        return np.atleast_1d(np.dot(weights, f(nodes)))

    value, upper = _refine(estimate, spec.upper or upper, spec.panel_width or width, spec)
    return float(value[0]), upper


def _default_width(orders: Sequence[float]) -> float:
    return min(1.0, 2.0 / max(orders))


def compose_on_points(orders: Sequence[float], xs, ys, spec: QuadratureSpec | None = None,
                      kernel=smd_kernel_values) -> tuple[np.ndarray, float, int]:
    """Kernel of ``S_{n_r} o ... o S_{n_1}`` at the points ``(xs[p], ys[p])``.

    ``orders`` is outermost first. The integral recursion is discretised on
    one node set shared by every level:
    ``v_1(s) = K_{n_1}(s, y)``, ``v_i(t) = sum_j w_j K_{n_i}(t, s_j) v_{i-1}(s_j)``
    and finally ``K(x, y) = sum_j w_j K_{n_r}(x, s_j) v_{r-1}(s_j)``.

    Returns ``(values, T, node_count)``.
    """
    spec = spec or QuadratureSpec()
    orders = [float(n) for n in orders]
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    if xs.shape != ys.shape:
        raise ValueError("xs and ys must have the same shape")
    if len(orders) == 1:
        return kernel(orders[0], xs, ys), 0.0, 0

    upper = truncation_point(orders, float(xs.max(initial=0.0)), float(ys.max(initial=0.0)))
    nodes_used = [0]

    def estimate(T, h):
        nodes, w = composite_gauss_legendre(T, max(1, math.ceil(T / h)), spec.nodes_per_panel)
        nodes_used[0] = nodes.size
        v = kernel(orders[-1], nodes[:, None], ys[None, :])  # (nodes, points)
        for n in reversed(orders[1:-1]):
            wv = w[:, None] * v
            out = np.empty_like(v)
            step = max(1, _BLOCK_ELEMENTS // nodes.size)
            for lo in range(0, nodes.size, step):
                block = kernel(n, nodes[lo:lo + step, None], nodes[None, :])
                out[lo:lo + step] = block @ wv
            v = out
        outer = kernel(orders[0], xs[None, :], nodes[:, None])  # (nodes, points)
        return np.einsum("j,jp,jp->p", w, outer, v)

    values, upper = _refine(estimate, spec.upper or upper, spec.panel_width or _default_width(orders), spec)
    return values, upper, nodes_used[0]
