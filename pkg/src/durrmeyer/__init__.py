"""Exact kernels for compositions of Bernstein-Durrmeyer operators and numerical
checks of the Szasz-Mirakjan-Durrmeyer composition law."""

from .bd_ops import (
    BDKernel,
    CompositionCoefficients,
    apply,
    composition_coefficients,
    eigenvalue,
    iterate_apply,
    iterate_paths,
    kernel_direct,
    kernel_eigen_expansion,
    kernel_general_closed,
    kernel_pair_closed,
    kernel_r_fold_product_form,
    kernel_triple_closed,
    matrix_A,
    matrix_A_inverse_closed,
    verify_commutativity,
)
from .errors import (
    ConvergenceFailure,
    DurrmeyerError,
    GrowthViolation,
    IndexOutOfRange,
    ShapeMismatch,
    ZeroDiagonal,
)
from .exact_core import (
    Rational,
    RationalMatrix,
    binomial,
    determinant,
    falling_factorial,
    mat_mul,
    solve_upper_triangular,
)
from .oracle import compose_exact, compose_numeric
from .poly import (
    BivariatePoly,
    Poly,
    bernstein_basis,
    bivar_partial_integral,
    inner_product,
    integrate01,
    legendre_unnormalized,
)
from .smd_ops import (
    GridReport,
    SMDKernelParams,
    apply_operator,
    compose_kernel_numeric,
    kernel_bessel,
    kernel_series,
    smd_basis,
    verify_harmonic_mean_remark,
    verify_theorem8,
)

__version__ = "0.1.0"
