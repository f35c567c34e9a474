"""Szasz-Mirakjan-Durrmeyer kernels in floating point and the composition checks.

The operator index ``n`` is a positive real throughout: composing ``S_m`` and
``S_n`` gives index ``mn/(m+n)``, which is rarely an integer.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceFailure, GrowthViolation
from .kernels import smd_kernel_values
from .quadrature import QuadratureSpec, compose_on_points, integrate_half_line

__all__ = [
    "GridReport",
    "SMDKernelParams",
    "apply_operator",
    "compose_kernel_numeric",
    "harmonic_index",
    "kernel_bessel",
    "kernel_series",
    "smd_basis",
    "uniform_grid",
    "verify_harmonic_mean_remark",
    "verify_product_formula_smd",
    "verify_theorem8",
]


def _default_max_terms() -> int:
    return int(os.environ.get("VERIFY_MAX_TERMS", 100_000))


@dataclass(frozen=True)
class SMDKernelParams:
    """Series truncation controls.

    Summation stops once ``patience`` consecutive terms past the peak are each
    below ``series_tol`` times the running sum.
    """

    series_tol: float = 1e-16
    max_terms: int = field(default_factory=_default_max_terms)
    patience: int = 50

    def __post_init__(self):
        if not self.series_tol > 0:
            raise ValueError("series_tol must be positive")
        if self.max_terms < 1 or self.patience < 1:
            raise ValueError("max_terms and patience must be >= 1")


def _check_index(n: float):
    if not n > 0 or not math.isfinite(n):
        raise ValueError(f"operator index must be a positive real, got {n!r}")


def _check_point(*coords: float):
    for c in coords:
        if c < 0 or not math.isfinite(c):
            raise ValueError(f"points must lie in [0, inf), got {c!r}")


def _log_product(a: float, b: float) -> float:
    # log(ab), without log(0) when ab underflows
    ab = a * b
    return math.log(ab) if ab > 0 else math.log(a) + math.log(b)


def smd_basis(n: float, k: int, x: float) -> float:
    """``s_{n,k}(x) = (nx)^k e^{-nx} / k!`` evaluated in log space."""
    _check_index(n)
    _check_point(x)
    if k < 0:
        raise ValueError("k must be non-negative")
    if x == 0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * _log_product(n, x) - math.lgamma(k + 1) - n * x)


def kernel_series(n: float, x: float, y: float, params: SMDKernelParams | None = None) -> float:
    """``K_n(x, y) = n sum_k s_{n,k}(x) s_{n,k}(y)`` by direct summation."""
    _check_index(n)
    _check_point(x, y)
    params = params or SMDKernelParams()
    if x == 0 or y == 0:
        return n * math.exp(-n * (x + y))
    log_base = _log_product(n, x) + _log_product(n, y)
    peak = n * math.sqrt(x * y)
    terms = []
    total = 0.0
    quiet = 0
    for k in range(params.max_terms):
        t = n * math.exp(k * log_base - 2.0 * math.lgamma(k + 1) - n * (x + y))
        terms.append(t)
        total += t
        if k >= peak and t <= params.series_tol * total:
            quiet += 1
            if quiet >= params.patience:
                return math.fsum(terms)
        else:
            quiet = 0
    raise ConvergenceFailure(f"kernel series for n={n}, x={x}, y={y} not converged in {params.max_terms} terms")


def kernel_bessel(n: float, x: float, y: float, params: SMDKernelParams | None = None) -> float:
    """``n e^{-n(x+y)} I_0(2n sqrt(xy))`` with the prefactor folded into the series.

    The terms ``q^j / (j!)^2`` with ``q = n^2 xy`` are generated by the ratio
    recurrence, starting from the largest term (at ``j = floor(sqrt q)``) whose
    logarithm already contains ``-n(x+y)``; so nothing overflows even when
    ``e^{n(x+y)}`` and ``I_0`` individually would.
    """
    _check_index(n)
    _check_point(x, y)
    params = params or SMDKernelParams()
    q = n * n * x * y
    if q == 0:
        return n * math.exp(-n * (x + y))
    j0 = int(math.floor(math.sqrt(q)))
    log_peak = math.log(n) - n * (x + y) + j0 * math.log(q) - 2.0 * math.lgamma(j0 + 1)
    peak = math.exp(log_peak)
    terms = [peak]
    t = peak
    for j in range(j0, 0, -1):
        t *= j * j / q
        terms.append(t)
        if t <= 1e-18 * peak:
            break
    t = peak
    j = j0
    steps = 0
    while True:
        j += 1
        steps += 1
        t *= q / (j * j)
        terms.append(t)
        if t <= 1e-18 * peak:
            break
        if steps >= params.max_terms:
            raise ConvergenceFailure(f"Bessel series for n={n}, x={x}, y={y} not converged")
    return math.fsum(terms)


def compose_kernel_numeric(m: float, n: float, x: float, y: float,
                           quad: QuadratureSpec | None = None) -> float:
    """Kernel of ``S_m o S_n`` at ``(x, y)``: ``integral_0^inf K_n(t, y) K_m(x, t) dt``."""
    _check_index(m)
    _check_index(n)
    _check_point(x, y)
    values, _, _ = compose_on_points([m, n], [x], [y], quad)
    return float(values[0])


def harmonic_index(orders: Sequence[float]) -> float:
    """``1 / (1/n_1 + ... + 1/n_r)``: the index of the composed operator."""
    return 1.0 / math.fsum(1.0 / n for n in orders)


@dataclass
class GridReport:
    orders: tuple[float, ...]
    target_index: float
    points: list[tuple[float, float]]
    lhs: list[float]
    rhs: list[float]
    tol: float
    quadrature_params: dict

    @property
    def errors(self) -> list[float]:
        return [abs(a - b) for a, b in zip(self.lhs, self.rhs)]

    @property
    def max_abs_error(self) -> float:
        return max(self.errors, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_abs_error <= self.tol

    def to_dict(self) -> dict:
        return {
            "orders": list(self.orders),
            "target_index": self.target_index,
            "points": [list(p) for p in self.points],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "max_abs_error": self.max_abs_error,
            "tol": self.tol,
            "passed": self.passed,
            "quadrature_params": self.quadrature_params,
        }

    def rows(self):
        """``(x, y, lhs, rhs, abs_error)`` per grid point."""
        for (x, y), a, b, e in zip(self.points, self.lhs, self.rhs, self.errors):
            yield x, y, a, b, e


def uniform_grid(nx: int, ny: int, xmax: float, ymax: float | None = None) -> list[tuple[float, float]]:
    """``nx * ny`` points on ``[0, xmax] x [0, ymax]``, endpoints included."""
    ymax = xmax if ymax is None else ymax
    xs = np.linspace(0.0, xmax, nx)
    ys = np.linspace(0.0, ymax, ny)
    return [(float(a), float(b)) for a in xs for b in ys]


def _grid_report(orders: Sequence[float], grid, tol: float, quad: QuadratureSpec | None) -> GridReport:
    for n in orders:
        _check_index(n)
    points = [(float(a), float(b)) for a, b in grid]
    for p in points:
        _check_point(*p)
    # below ~1e-13 successive double-precision estimates no longer settle
    quad = quad or QuadratureSpec(tol=max(1e-13, min(1e-10, tol / (2 * len(orders)))))
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    lhs, upper, nodes = compose_on_points(orders, xs, ys, quad)
    target = harmonic_index(orders)
    rhs = [kernel_bessel(target, a, b) for a, b in points]
    return GridReport(
        orders=tuple(float(n) for n in orders),
        target_index=target,
        points=points,
        lhs=[float(v) for v in lhs],
        rhs=rhs,
        tol=tol,
        quadrature_params={"upper": upper, "nodes": nodes, "nodes_per_panel": quad.nodes_per_panel},
    )


def verify_theorem8(m: float, n: float, grid, tol: float = 1e-8,
                    quad: QuadratureSpec | None = None) -> GridReport:
    """Compare the composed kernel of ``S_m o S_n`` with ``K_{mn/(m+n)}`` on ``grid``."""
    return _grid_report([m, n], grid, tol, quad)


def verify_harmonic_mean_remark(orders: Sequence[float], grid, tol: float = 1e-7,
                                quad: QuadratureSpec | None = None) -> GridReport:
    """Nested composition of ``S_{n_r} o ... o S_{n_1}`` against ``K_{1/sum(1/n_i)}``."""
    if not orders:
        raise ValueError("orders must be nonempty")
    return _grid_report(list(orders), grid, tol, quad)


def apply_operator(n: float, f: Callable, x: float, quad: QuadratureSpec | None = None,
                   alpha: float = 0.0) -> float:
    """``(S_n f)(x) = integral_0^inf f(y) K_n(x, y) dy``.

    ``alpha`` is the caller's growth rate for ``|f(t)| <= C e^{alpha t}``; the
    integral only exists when ``alpha < n``.
    """
    _check_index(n)
    _check_point(x)
    if alpha >= n:
        raise GrowthViolation(f"growth rate {alpha} is not below the operator index {n}")
    def integrand(t):
        vals = f(t)
        vals = np.asarray(vals if np.ndim(vals) else np.vectorize(f)(t), dtype=float)
        return vals * smd_kernel_values(n, x, t)

    decay = n - max(alpha, 0.0)
    upper = x + (40.0 + 10.0 * math.log1p(n)) / decay
    width = min(1.0, 2.0 / n)
    value, _ = integrate_half_line(integrand, upper, width, quad)
    return value


def verify_product_formula_smd(m: float, mu: int, n: float, nu: int, points: Sequence[float],
                               rtol: float = 1e-12) -> bool:
    """Check ``s_{m,mu} s_{n,nu} = m^mu n^nu/(m+n)^(mu+nu) C(mu+nu, nu) s_{m+n,mu+nu}`` pointwise."""
    factor = math.exp(
        mu * math.log(m) + nu * math.log(n) - (mu + nu) * math.log(m + n)
    ) * math.comb(mu + nu, nu)
    for t in points:
        lhs = smd_basis(m, mu, t) * smd_basis(n, nu, t)
        rhs = factor * smd_basis(m + n, mu + nu, t)
        if not math.isclose(lhs, rhs, rel_tol=rtol, abs_tol=1e-300):
            return False
    return True
