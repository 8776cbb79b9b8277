"""Numerical toolkit for linear Skorohod equations under fractional noise.

Modules
-------
``model``        parameter and grid dataclasses, seeded stream plumbing
``special``      the squared-factorial power series, Hermite batteries,
                 square-root Volterra kernels and their calibration
``quad``         graded Gauss-Legendre quadrature for endpoint powers
``fields``       exact Gaussian samplers for fractional motions and sheets
``operators``    adjoint-kernel transfer, fractional integrals and
                 derivatives, the inverse-kernel map and the shift density
``chaos``        chaos-expansion solvers, Wick-corrected Euler scheme,
                 Picard iteration for the deterministic sheet equation
``experiments``  reproducible Monte Carlo studies behind the CLI
"""
from .model import (
    Grid2D,
    HurstPair,
    ModelParams,
    MonteCarloResult,
    RngStreamSpec,
    TimeGrid,
    build_grid,
    build_grid2d,
)
from .special import (
    NegativityInterval,
    VolterraKernelSpec,
    h0,
    h0_array,
    hermite_all,
    negativity_interval,
    volterra_kernel,
)
from .fields import (
    GaussianField,
    cov_fbm,
    cov_sheet,
    sample_fbm,
    sample_fbm_batch,
    sample_sheet,
    sample_sheet_batch,
)
from .operators import (
    GridFunction1D,
    GridFunction2D,
    OperatorRegime,
    frac_derivative_2d,
    frac_integral_2d,
    girsanov_log_density,
    kinv_apply_F,
    kstar_apply,
    rkhs_norm_sq_separable,
)
from .chaos import (
    TruncatedChaosSolution,
    chaos_sum_1d,
    deterministic_sheet_solution,
    exact_solution_1d,
    picard_sheet,
    solve_sheet_chaos,
    wick_euler_1d,
)
from .experiments import ExperimentReport, NegativityConfig, RunSettings

__version__ = "0.1.0"
