"""Kernels taken straight from the operator definitions.

Nothing here uses a composition formula. Both the brute-force oracle and the
closed-form code build on this module, which keeps the oracle independent of
the formulas it checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import i0e

from .poly import BivariatePoly, Poly, bernstein_basis

__all__ = ["PROVENANCES", "BDKernel", "kernel_direct", "smd_kernel_values"]

PROVENANCES = frozenset(
    {"direct", "pair_closed", "triple_closed", "general_closed", "eigen_expansion", "r_fold_product", "oracle"}
)


@dataclass(frozen=True)
class BDKernel:
    """Kernel of ``M_{n_r} o ... o M_{n_1}``.

    ``orders`` lists the indices outermost first, ``(n_r, ..., n_1)``;
    ``provenance`` records which representation produced ``kernel``.
    """

    orders: tuple[int, ...]
    kernel: BivariatePoly = field(compare=False)
    provenance: str = field(default="direct", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def __call__(self, x, y):
        return self.kernel(x, y)

    def row_integral(self) -> Poly:
        """``x -> integral of K(x, y) dy``; equals 1 for every Durrmeyer kernel."""
        return self.kernel.integrate_y()

    def conserves_mass(self) -> bool:
        return self.row_integral() == Poly([1])

    def is_symmetric(self) -> bool:
        return self.kernel.is_symmetric()

    def apply(self, f: Poly) -> Poly:
        return self.kernel.apply_to(f)


_DIRECT_CACHE: dict[int, BivariatePoly] = {}


def _direct_poly(n: int) -> BivariatePoly:
    k = _DIRECT_CACHE.get(n)
    if k is None:
        k = BivariatePoly()
        for j in range(n + 1):
            p = bernstein_basis(n, j)
            k = k + BivariatePoly.outer(p, p)
        k = _DIRECT_CACHE[n] = k * Fraction(n + 1)
    return k


def kernel_direct(n: int) -> BDKernel:
    """``K_n(x, y) = (n+1) sum_k p_{n,k}(x) p_{n,k}(y)``."""
    if n < 0:
        raise ValueError("order must be non-negative")
    return BDKernel((n,), _direct_poly(n), "direct")


def smd_kernel_values(n: float, x, t) -> np.ndarray:
    """Vectorised Szasz-Mirakjan-Durrmeyer kernel ``K_n(x, t)``.

    Uses the exponentially scaled Bessel function so that
    ``n * i0e(z) * exp(z - n(x+t))`` with ``z = 2n sqrt(xt)`` never overflows:
    the exponent equals ``-n (sqrt(x) - sqrt(t))**2 <= 0``.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    sx, st = np.sqrt(x), np.sqrt(t)
    z = 2.0 * n * sx * st
    return n * i0e(z) * np.exp(-n * (sx - st) ** 2)
