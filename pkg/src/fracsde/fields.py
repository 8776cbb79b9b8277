"""Exact Gaussian samplers for fractional Brownian motion and the fractional sheet.

Sampling is by Cholesky factorisation of the exact covariance on the grid
(time zero excluded, where the field is identically 0).  The sheet factorises:
its covariance is the product of the two one-parameter covariances, so a
matrix normal V = L_s Z L_t' with Z iid standard normal has exactly the right
law.  A second, independent route expresses the motion through its Volterra
kernel acting on white noise; it is kept as a cross-check of the kernel
implementation and as the noise-consistent driver for discrete chaos sums,
not as the production sampler.

Every sampled field keeps the standard-normal draws that generated it
(``GaussianField.white_noise``): the discrete Skorohod machinery integrates
against that noise, not against the field increments.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .model import Grid2D, RngStreamSpec, TimeGrid, build_grid
from .special import VolterraKernelSpec, volterra_kernel

__all__ = [
    "NotPositiveDefinite",
    "GaussianField",
    "CovarianceFactor",
    "cov_fbm",
    "cov_sheet",
    "fbm_covariance",
    "factor_covariance",
    "sample_fbm",
    "sample_fbm_batch",
    "sample_sheet",
    "sample_sheet_batch",
    "volterra_projection_matrix",
    "increment_transfer_matrix",
    "sample_fbm_volterra",
    "volterra_field",
    "sample_sheet_volterra",
    "sheet_volterra_field",
]


class NotPositiveDefinite(np.linalg.LinAlgError):
    """Covariance matrix failed Cholesky factorisation on this grid."""


def cov_fbm(alpha: float, s, u):
    """R(s, u) = (s^{2a} + u^{2a} - |s-u|^{2a}) / 2; broadcasts over arrays."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha={alpha} not in (0, 1)")
    s = np.asarray(s, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(s < 0.0) or np.any(u < 0.0):
        raise ValueError("time points must be >= 0")
    p = 2.0 * alpha
    out = 0.5 * (s**p + u**p - np.abs(s - u) ** p)
    return float(out) if out.ndim == 0 else out


def cov_sheet(alpha: float, beta: float, s, t, u, v):
    """Product covariance of the sheet: R_alpha(s, u) * R_beta(t, v)."""
    return cov_fbm(alpha, s, u) * cov_fbm(beta, t, v)


def fbm_covariance(alpha: float, t: np.ndarray) -> np.ndarray:
    """Full covariance matrix on the grid t x t."""
    t = np.asarray(t, dtype=float)
    return cov_fbm(alpha, t[:, None], t[None, :])


@dataclass(frozen=True)
class GaussianField:
    """A sampled field together with the white noise that generated it.

    values live on the grid nodes (origin row/column pinned at 0); white_noise
    is the array of iid standard normals, one per grid cell, from which the
    values were built.  Keeping the noise makes the sample usable as the
    driver of discrete multiple integrals.
    """

    grid: Union[TimeGrid, Grid2D]
    values: np.ndarray
    white_noise: np.ndarray

    def __post_init__(self) -> None:
        if isinstance(self.grid, Grid2D):
            ns, nt = self.grid.n_s, self.grid.n_t
            if self.values.shape != (ns + 1, nt + 1):
                raise ValueError("sheet values must cover all grid nodes")
            if self.white_noise.shape != (ns, nt):
                raise ValueError("sheet noise must have one entry per cell")
            edge = max(np.max(np.abs(self.values[0, :])), np.max(np.abs(self.values[:, 0])))
            if edge != 0.0:
                raise ValueError("sheet must vanish on the coordinate axes")
        else:
            n = self.grid.n_steps
            if self.values.shape != (n + 1,):
                raise ValueError("path values must cover all grid nodes")
            if self.white_noise.shape != (n,):
                raise ValueError("path noise must have one entry per cell")
            if self.values[0] != 0.0:
                raise ValueError("path must start at 0")


@dataclass(frozen=True)
class CovarianceFactor:
    """Lower Cholesky factor of the exact fBm covariance on grid.points[1:]."""

    alpha: float
    grid: TimeGrid
    lower_triangular: np.ndarray


def _cholesky_guarded(alpha: float, t: np.ndarray) -> np.ndarray:
    # near-singular but formally positive matrices (very fine grids, alpha
    # near 1) are rejected when a pivot collapses below 1e-13 in square
    R = fbm_covariance(alpha, t)
    try:
        L = np.linalg.cholesky(R)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(
            f"covariance not positive definite for alpha={alpha}, n={len(t)}"
        ) from exc
    if np.any(np.diag(L) ** 2 < 1e-13):
        raise NotPositiveDefinite(
            f"covariance numerically rank-deficient for alpha={alpha}, n={len(t)}"
        )
    return L


def factor_covariance(alpha: float, grid: TimeGrid) -> CovarianceFactor:
    """Factor the exact covariance on the positive grid points."""
    L = _cholesky_guarded(alpha, grid.points[1:])
    return CovarianceFactor(alpha=alpha, grid=grid, lower_triangular=L)


def sample_fbm(factor: CovarianceFactor, rng_spec: RngStreamSpec) -> GaussianField:
    """One path of the motion on the factor's grid, noise retained."""
    n = factor.grid.n_steps
    z = rng_spec.generator().standard_normal(n)
    values = np.zeros(n + 1)
    values[1:] = factor.lower_triangular @ z
    return GaussianField(grid=factor.grid, values=values, white_noise=z)


def sample_fbm_batch(
    factor: CovarianceFactor, n_replicas: int, rng_spec: RngStreamSpec
) -> tuple[np.ndarray, np.ndarray]:
    """(values, noise) for many replicas at once: shapes (R, n+1), (R, n)."""
    if n_replicas < 1:
        raise ValueError("n_replicas must be >= 1")
    n = factor.grid.n_steps
    z = rng_spec.generator().standard_normal((n_replicas, n))
    values = np.zeros((n_replicas, n + 1))
    values[:, 1:] = z @ factor.lower_triangular.T
    return values, z


def sample_sheet(
    alpha: float, beta: float, grid: Grid2D, rng_spec: RngStreamSpec
) -> GaussianField:
    """One sheet sample V = L_s Z L_t' on grid nodes, noise Z retained."""
    values, z = sample_sheet_batch(alpha, beta, grid, 1, rng_spec)
    return GaussianField(grid=grid, values=values[0], white_noise=z[0])


def sample_sheet_batch(
    alpha: float, beta: float, grid: Grid2D, n_replicas: int, rng_spec: RngStreamSpec
) -> tuple[np.ndarray, np.ndarray]:
    """Sheet replicas: values (R, n_s+1, n_t+1) and noise (R, n_s, n_t)."""
    if n_replicas < 1:
        raise ValueError("n_replicas must be >= 1")
    Ls = _cholesky_guarded(alpha, grid.s[1:])
    Lt = _cholesky_guarded(beta, grid.t[1:])
    z = rng_spec.generator().standard_normal((n_replicas, grid.n_s, grid.n_t))
    values = np.zeros((n_replicas, grid.n_s + 1, grid.n_t + 1))
    values[:, 1:, 1:] = np.einsum("ij,rjk,lk->ril", Ls, z, Lt)
    return values, z


# Projection matrices are quadrature-heavy; memoise per (kernel, grid) shape.
_PROJECTION_CACHE: dict[tuple, np.ndarray] = {}


def volterra_projection_matrix(spec: VolterraKernelSpec, grid: TimeGrid) -> np.ndarray:
    """C[j, i] = cell-averaged kernel int_{cell_i} K(t_j, s) ds / sqrt(dt).

    Applied to iid normals xi, the vector C xi has covariance C C', the cell
    discretisation of the exact covariance; the Cholesky sampler stays the
    production route, this one ties field values to their white noise.
    """
    key = (spec.alpha, spec.d_alpha, spec.quadrature_n, grid.n_steps, grid.T)
    hit = _PROJECTION_CACHE.get(key)
    if hit is not None:
        return hit
    t = grid.points
    n = grid.n_steps
    dt = grid.dt
    u, w = np.polynomial.legendre.leggauss(24)
    u = (u + 1.0) / 2.0
    w = w / 2.0
    C = np.zeros((n, n))
    for j in range(1, n + 1):
        tj = t[j]
        for i in range(j):
            a, b = t[i], t[i + 1]
            # cell touching t_j: grade for the (t_j - s)^{alpha-1/2} factor
            if i == j - 1 and spec.alpha < 0.5:
                p = 1.0 / (spec.alpha + 0.5)
                s = b - (b - a) * u**p
                ws = w * (b - a) * p * u ** (p - 1.0)
            else:
                s = a + (b - a) * u
                ws = w * (b - a)
            C[j - 1, i] = float(volterra_kernel(spec, tj, s) @ ws) / np.sqrt(dt)
    _PROJECTION_CACHE[key] = C
    return C


def increment_transfer_matrix(spec: VolterraKernelSpec, grid: TimeGrid) -> np.ndarray:
    """M with Delta B_k = sum_i M[k, i] xi_i; rows are increments of C.

    At alpha = 1/2 this is exactly sqrt(dt) * I: white-noise cells coincide
    with the increment cells of the motion.
    """
    C = volterra_projection_matrix(spec, grid)
    return np.diff(C, axis=0, prepend=0.0)


def sample_fbm_volterra(
    spec: VolterraKernelSpec, grid: TimeGrid, n_replicas: int, rng_spec: RngStreamSpec
) -> tuple[np.ndarray, np.ndarray]:
    """Paths driven through the Volterra kernel: (values, noise) batch."""
    if n_replicas < 1:
        raise ValueError("n_replicas must be >= 1")
    C = volterra_projection_matrix(spec, grid)
    z = rng_spec.generator().standard_normal((n_replicas, grid.n_steps))
    out = np.zeros((n_replicas, grid.n_steps + 1))
    out[:, 1:] = z @ C.T  # C already carries the 1/sqrt(dt) white-noise scale
    return out, z


def volterra_field(
    spec: VolterraKernelSpec, grid: TimeGrid, rng_spec: RngStreamSpec
) -> GaussianField:
    """Single Volterra-driven path as a GaussianField (noise-consistent)."""
    values, z = sample_fbm_volterra(spec, grid, 1, rng_spec)
    return GaussianField(grid=grid, values=values[0], white_noise=z[0])


def sample_sheet_volterra(
    spec_s: VolterraKernelSpec,
    spec_t: VolterraKernelSpec,
    grid: Grid2D,
    n_replicas: int,
    rng_spec: RngStreamSpec,
) -> tuple[np.ndarray, np.ndarray]:
    """Sheet replicas driven through the kernel on both axes.

    V = C_s Xi C_t' so rectangle increments are exactly M_s Xi M_t' with the
    per-axis increment transfer matrices.
    """
    if n_replicas < 1:
        raise ValueError("n_replicas must be >= 1")
    Cs = volterra_projection_matrix(spec_s, build_grid(grid.n_s, grid.T))
    Ct = volterra_projection_matrix(spec_t, build_grid(grid.n_t, grid.T))
    z = rng_spec.generator().standard_normal((n_replicas, grid.n_s, grid.n_t))
    values = np.zeros((n_replicas, grid.n_s + 1, grid.n_t + 1))
    values[:, 1:, 1:] = np.einsum("ij,rjk,lk->ril", Cs, z, Ct)
    return values, z


def sheet_volterra_field(
    spec_s: VolterraKernelSpec,
    spec_t: VolterraKernelSpec,
    grid: Grid2D,
    rng_spec: RngStreamSpec,
) -> GaussianField:
    """Single kernel-driven sheet as a GaussianField."""
    values, z = sample_sheet_volterra(spec_s, spec_t, grid, 1, rng_spec)
    return GaussianField(grid=grid, values=values[0], white_noise=z[0])
