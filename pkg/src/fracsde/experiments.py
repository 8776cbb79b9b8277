"""End-to-end experiment runners behind the command-line interface.

Each ``cmd_*`` function reproduces one checkable claim: agreement of the
truncated chaos sum with the exponential solution, the Euler-scheme
convergence threshold in the Hurst exponent, negativity of the sheet
solution on the deterministic window, the change-of-measure unit-mean
identity, the fractional-operator identities, and plain field sampling
with covariance validation.

Runs are reproducible from (settings, seed): replicas are drawn in fixed
chunks keyed by (seed, chunk index), partial results are combined in chunk
order with compensated sums, and thread counts change wall-clock only.
Every metric in a report carries its declared tolerance and the seed it
was computed under; an experiment passes iff all its metrics pass.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla
import scipy.stats

from .chaos import (
    chaos_norm_decay,
    chaos_sum_1d,
    deterministic_sheet_solution,
    exact_solution_1d,
    solve_sheet_chaos_batch,
    wick_euler_paths,
)
from .fields import (
    cov_fbm,
    factor_covariance,
    fbm_covariance,
    sample_fbm_batch,
    sample_sheet_batch,
)
from .model import (
    Grid2D,
    HurstPair,
    ModelParams,
    MonteCarloResult,
    RngStreamSpec,
    build_grid,
    build_grid2d,
)
from .operators import (
    GridFunction2D,
    OperatorRegime,
    frac_derivative_2d,
    frac_integral_2d,
    kinv_apply_F,
    kinv_norm_sq_discrete,
    kstar_indicator_norm_sq,
    power_gap_integral,
    rkhs_norm_sq_separable,
)
from .special import VolterraKernelSpec, negativity_interval, volterra_kernel
from .quad import gauss_legendre_01

__all__ = [
    "EmptyRegion",
    "TruncationTooLow",
    "RunSettings",
    "NegativityConfig",
    "MetricResult",
    "ExperimentReport",
    "negativity_mask",
    "cmd_exact_vs_chaos",
    "cmd_euler_study",
    "cmd_negativity",
    "cmd_girsanov_check",
    "cmd_operator_check",
    "cmd_simulate",
]

# Fixed chunking makes the replica -> stream map independent of thread
# count; never tie this to a config knob.
_CHUNK_REPLICAS = 4096


class EmptyRegion(ValueError):
    """The requested negativity window contains no grid nodes."""


class TruncationTooLow(RuntimeError):
    """Estimated chaos tail exceeds the tolerated share of the field scale."""


@dataclass(frozen=True)
class RunSettings:
    """Common experiment configuration; one flat bag shared by all commands.

    ``beta`` switches the sheet model on; ``truncation`` of None picks the
    per-command default (20 Hermite orders for one-parameter runs, 3 for
    sheet runs).
    """

    alpha: float = 0.3
    beta: float | None = None
    a: float = 1.0
    b: float = 0.0
    T: float = 1.0
    grid_n: int = 64
    samples: int = 1000
    seed: int = 20240801
    truncation: int | None = None
    epsilon: float = 1.0
    threads: int = 1
    debug_corrupt_quadrature: bool = False

    def __post_init__(self) -> None:
        if self.grid_n < 1 or self.samples < 1 or self.threads < 1:
            raise ValueError("grid_n, samples and threads must be positive")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be > 0")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def model_params(self) -> ModelParams:
        return ModelParams(HurstPair(self.alpha, self.beta), self.a, self.b, self.T)


@dataclass(frozen=True)
class NegativityConfig:
    """Settings of the small-noise negativity experiment.

    The window (0, n_window)^2 hosts the region where the zero-noise limit
    surface is below -delta; ``grid`` must span exactly that window.
    """

    a: float = 1.0
    epsilon: float = 0.05
    n_window: float = 3.0
    grid: Grid2D = field(default_factory=lambda: build_grid2d(16, 16, 3.0))
    truncation: int = 3
    replicas: int = 2000
    seed: int = 20240801
    delta: float = 0.1
    threads: int = 1

    def __post_init__(self) -> None:
        if self.a <= 0.0:
            raise ValueError("a must be > 0")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be > 0")
        if abs(self.grid.T - self.n_window) > 1e-12:
            raise ValueError("grid horizon must equal the window size")
        if self.replicas < 2:
            raise ValueError("need at least two replicas")


@dataclass(frozen=True)
class MetricResult:
    """One named check: value, declared tolerance, verdict, provenance."""

    name: str
    value: float
    tolerance: str
    passed: bool
    seed: int
    std_error: float | None = None
    target: float | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = bool(self.passed)
        return d


@dataclass(frozen=True)
class ExperimentReport:
    """Everything one command produced: metrics, tables, timing."""

    experiment: str
    parameters: dict
    metrics: tuple[MetricResult, ...]
    wall_seconds: float
    tables: dict[str, tuple[list[str], list[tuple]]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(m.passed for m in self.metrics)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "parameters": self.parameters,
            "metrics": [m.to_dict() for m in self.metrics],
            "passed": self.passed,
            "wall_seconds": self.wall_seconds,
            "tables": sorted(self.tables),
        }


# ----------------------------------------------------------------------------
# Replica-chunked Monte Carlo plumbing
# ----------------------------------------------------------------------------

def _chunk_layout(total: int) -> list[tuple[int, int]]:
    """(chunk_index, replica_count) pairs covering ``total`` replicas."""
    out = []
    start = 0
    while start < total:
        count = min(_CHUNK_REPLICAS, total - start)
        out.append((len(out), count))
        start += count
    return out


def _map_chunks(work: Callable, total: int, threads: int) -> list:
    """Run ``work(chunk_index, count)`` over all chunks.

    Results come back in chunk order whatever the completion order, so any
    downstream reduction is deterministic in the thread count.
    """
    chunks = _chunk_layout(total)
    if threads <= 1:
        return [work(i, c) for i, c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ic: work(ic[0], ic[1]), chunks))


def _combine_moments(partials: Sequence[tuple], seed: int) -> MonteCarloResult:
    """Fold per-chunk (count, sum, sum of squares) into one estimate."""
    n = sum(p[0] for p in partials)
    s1 = math.fsum(p[1] for p in partials)
    s2 = math.fsum(p[2] for p in partials)
    mean = s1 / n
    var = max(s2 - n * mean * mean, 0.0) / (n - 1)
    se = math.sqrt(var / n)
    lo, hi = mean - 1.96 * se, mean + 1.96 * se
    return MonteCarloResult(mean, se, n, (lo, hi), seed)


def _moments(samples: np.ndarray) -> tuple[int, float, float]:
    flat = np.asarray(samples, dtype=float).reshape(-1)
    return flat.size, float(flat.sum()), float(np.square(flat).sum())


def _within_se(value: float, target: float, se: float, k: float) -> bool:
    # degenerate spread (a = 0 cases) falls back to near-exact agreement
    if se == 0.0:
        return abs(value - target) < 1e-12
    return abs(value - target) <= k * se


# ----------------------------------------------------------------------------
# Exponential form vs truncated chaos
# ----------------------------------------------------------------------------

def cmd_exact_vs_chaos(settings: RunSettings) -> ExperimentReport:
    """Pathwise agreement of the Hermite chaos sum with the exponential form.

    Two metrics: the sup-node error of the truncated sum over all sampled
    paths (tolerance 1e-8 at the default truncation) and the Monte Carlo
    mean of X_T against its closed-form value e^{bT} (4 standard errors).
    """
    if settings.beta is not None:
        raise ValueError("exact-vs-chaos is a one-parameter experiment")
    t0 = time.perf_counter()
    p = settings.model_params()
    N = 20 if settings.truncation is None else settings.truncation
    grid = build_grid(settings.grid_n, settings.T)
    factor = factor_covariance(settings.alpha, grid)

    def work(idx: int, count: int):
        values, _ = sample_fbm_batch(factor, count, RngStreamSpec(settings.seed, idx))
        chaos = chaos_sum_1d(p.a, p.b, settings.alpha, grid.points, values, N).total
        exact = exact_solution_1d(p.a, p.b, settings.alpha, grid.points, values)
        sup = float(np.max(np.abs(chaos - exact)))
        return sup, _moments(exact[:, -1])

    parts = _map_chunks(work, settings.samples, settings.threads)
    sup_err = max(p_[0] for p_ in parts)
    mean_T = _combine_moments([p_[1] for p_ in parts], settings.seed)
    target = math.exp(p.b * p.T)

    metrics = (
        MetricResult(
            name="sup_node_error",
            value=sup_err,
            tolerance="< 1e-8",
            passed=sup_err < 1e-8,
            seed=settings.seed,
            detail={"truncation": N, "paths": settings.samples},
        ),
        MetricResult(
            name="terminal_mean",
            value=mean_T.estimate,
            tolerance="within 4 standard errors of exp(b T)",
            passed=_within_se(mean_T.estimate, target, mean_T.std_error, 4.0),
            seed=settings.seed,
            std_error=mean_T.std_error,
            target=target,
        ),
    )
    tables = {
        "exact_vs_chaos": (
            ["metric", "value", "target", "std_error"],
            [
                ("sup_node_error", sup_err, 0.0, ""),
                ("terminal_mean", mean_T.estimate, target, mean_T.std_error),
            ],
        )
    }
    return ExperimentReport(
        experiment="exact-vs-chaos",
        parameters=_echo(settings, truncation=N),
        metrics=metrics,
        wall_seconds=time.perf_counter() - t0,
        tables=tables,
    )


# ----------------------------------------------------------------------------
# Euler threshold study
# ----------------------------------------------------------------------------

_EULER_ALPHAS = (0.3, 0.5, 0.7)
_EULER_STEPS = (8, 16, 32, 64, 128)


def cmd_euler_study(settings: RunSettings) -> ExperimentReport:
    """L2 error of the Wick-corrected Euler scheme across step counts.

    All step counts share paths sampled on the finest grid (coarser grids
    read every 2^k-th node), so the trend across n is a coupled comparison.
    The convergence verdict per Hurst exponent is err(128) < err(8) / 2;
    the threshold case alpha = 1/2 is reported, not asserted.
    """
    if settings.b != 0.0:
        raise ValueError("the scheme is defined for the driftless equation")
    t0 = time.perf_counter()
    n_fine = _EULER_STEPS[-1]
    T = settings.T
    fine = build_grid(n_fine, T)
    errors: dict[float, dict[int, MonteCarloResult]] = {}

    for alpha in _EULER_ALPHAS:
        p = ModelParams(HurstPair(alpha), settings.a, 0.0, T)
        factor = factor_covariance(alpha, fine)

        def work(idx: int, count: int, p=p, factor=factor):
            values, _ = sample_fbm_batch(factor, count, RngStreamSpec(settings.seed, idx))
            limit = exact_solution_1d(p.a, 0.0, p.hurst.alpha, T, values[:, -1])
            out = []
            for n in _EULER_STEPS:
                sub = values[:, :: n_fine // n]
                x_hat = wick_euler_paths(p, build_grid(n, T), sub)[:, -1]
                out.append(_moments((x_hat - limit) ** 2))
            return out

        parts = _map_chunks(work, settings.samples, settings.threads)
        errors[alpha] = {
            n: _combine_moments([part[j] for part in parts], settings.seed)
            for j, n in enumerate(_EULER_STEPS)
        }

    rows = []
    metrics = []
    for alpha in _EULER_ALPHAS:
        per_n = errors[alpha]
        for n in _EULER_STEPS:
            r = per_n[n]
            rows.append((alpha, n, r.estimate, r.std_error))
        coarse, finest = per_n[_EULER_STEPS[0]], per_n[_EULER_STEPS[-1]]
        halved = finest.estimate < 0.5 * coarse.estimate
        verdict = "CONVERGES" if halved else "DOES-NOT-CONVERGE"
        if alpha > 0.5:
            passed, tol = halved, "err(128) < err(8)/2"
        elif alpha < 0.5:
            passed, tol = not halved, "err(128) >= err(8)/2"
        else:
            passed, tol = True, "reported only (threshold case)"
        metrics.append(
            MetricResult(
                name=f"euler_alpha_{alpha}",
                value=finest.estimate,
                tolerance=tol,
                passed=passed,
                seed=settings.seed,
                std_error=finest.std_error,
                detail={"verdict": verdict, "err_coarse": coarse.estimate},
            )
        )
    tables = {"euler_errors": (["alpha", "n_steps", "l2_error", "std_error"], rows)}
    return ExperimentReport(
        experiment="euler-study",
        parameters=_echo(settings),
        metrics=tuple(metrics),
        wall_seconds=time.perf_counter() - t0,
        tables=tables,
    )


# ----------------------------------------------------------------------------
# Negativity of the sheet solution
# ----------------------------------------------------------------------------

def negativity_mask(config: NegativityConfig) -> np.ndarray:
    """Boolean node mask of the window where the limit surface is below -delta.

    Nodes (s, t) strictly inside (0, n_window)^2 with lo < -a s t < hi,
    the bracketing interval of h0 at depth delta.
    """
    band = negativity_interval(config.delta)
    s = config.grid.s[:, None]
    t = config.grid.t[None, :]
    prod = -config.a * s * t
    inside = (s > 0.0) & (t > 0.0) & (s < config.n_window) & (t < config.n_window)
    mask = inside & (prod > band.lo) & (prod < band.hi)
    if not mask.any():
        raise EmptyRegion(
            f"no grid node satisfies {band.lo:.3f} < -a s t < {band.hi:.3f} "
            f"inside (0, {config.n_window})^2"
        )
    return mask


def _check_truncation(config: NegativityConfig) -> float:
    """Tail share of the order-(N+1) chaos norm; raise when above 10%."""
    proxy = ModelParams(
        HurstPair(0.5), config.a * config.epsilon, 0.0, config.n_window
    )
    norms = chaos_norm_decay(proxy, config.truncation + 1)
    tail = norms[-1] / math.fsum(norms)
    if tail > 0.1:
        raise TruncationTooLow(
            f"order-{config.truncation} truncation leaves a {tail:.1%} tail; "
            "raise the truncation or lower epsilon"
        )
    return float(tail)


def cmd_negativity(config: NegativityConfig) -> ExperimentReport:
    """Small-noise negativity of the sheet solution on the window.

    Simulates the scaled solution (noise coefficient a epsilon, drift -a)
    and estimates the probability that every node of the window is
    negative.  Pass requires the 95% lower confidence bound above zero
    plus the calibrated regression floor p-hat >= 0.5; the drift-equation
    limit surface is checked to sit below -delta on the window first.
    """
    t0 = time.perf_counter()
    mask = negativity_mask(config)
    tail = _check_truncation(config)
    grid = config.grid
    limit = deterministic_sheet_solution(
        -config.a, grid.s[:, None], grid.t[None, :]
    )
    margin = float((-config.delta - limit[mask]).min())
    p = ModelParams(
        HurstPair(0.5, 0.5), config.a * config.epsilon, -config.a, config.n_window
    )

    def work(idx: int, count: int):
        rng = RngStreamSpec(config.seed, idx).generator()
        noise = rng.standard_normal((count, grid.n_s, grid.n_t))
        orders = solve_sheet_chaos_batch(p, grid, noise, config.truncation)
        total = orders.sum(axis=0)
        all_neg = int(np.all(total[:, mask] < 0.0, axis=1).sum())
        return count, all_neg, total.sum(axis=0)

    parts = _map_chunks(work, config.replicas, config.threads)
    n = sum(p_[0] for p_ in parts)
    k = sum(p_[1] for p_ in parts)
    mean_surface = np.sum([p_[2] for p_ in parts], axis=0) / n
    p_hat = k / n
    # Clopper-Pearson 95% lower bound; 0 when no replica succeeded
    lcb = 0.0 if k == 0 else float(scipy.stats.beta.ppf(0.05, k, n - k + 1))
    mean_gap = float(np.max(np.abs(mean_surface - limit)[mask]))

    metrics = (
        MetricResult(
            name="limit_surface_margin",
            value=margin,
            tolerance="limit surface below -delta on every window node",
            passed=margin >= 0.0,
            seed=config.seed,
            detail={"delta": config.delta, "window_nodes": int(mask.sum())},
        ),
        MetricResult(
            name="all_negative_lcb",
            value=lcb,
            tolerance="95% lower confidence bound > 0",
            passed=lcb > 0.0,
            seed=config.seed,
            detail={"p_hat": p_hat, "successes": k, "replicas": n},
        ),
        MetricResult(
            name="all_negative_rate",
            value=p_hat,
            tolerance=">= 0.5 (calibrated regression floor at epsilon = 0.05)",
            passed=p_hat >= 0.5,
            seed=config.seed,
        ),
        MetricResult(
            name="mean_surface_gap",
            value=mean_gap,
            tolerance="reported only (epsilon -> 0 diagnostic)",
            passed=True,
            seed=config.seed,
            detail={"truncation_tail_share": tail},
        ),
    )
    srow = grid.s[:, None] + 0.0 * grid.t[None, :]
    trow = 0.0 * grid.s[:, None] + grid.t[None, :]
    rows = [
        (float(srow[i, j]), float(trow[i, j]), float(mean_surface[i, j]),
         float(limit[i, j]), bool(mask[i, j]))
        for i in range(grid.n_s + 1)
        for j in range(grid.n_t + 1)
    ]
    tables = {
        "negativity_surface": (["s", "t", "mean", "limit", "in_window"], rows)
    }
    params = asdict(config)
    params["grid"] = {"n_s": grid.n_s, "n_t": grid.n_t, "T": grid.T}
    return ExperimentReport(
        experiment="negativity",
        parameters=params,
        metrics=metrics,
        wall_seconds=time.perf_counter() - t0,
        tables=tables,
    )


# ----------------------------------------------------------------------------
# Change-of-measure unit-mean check
# ----------------------------------------------------------------------------

def cmd_girsanov_check(settings: RunSettings) -> ExperimentReport:
    """Unit mean of the shift density and centering of the shifted field.

    Two density normalisations are reported side by side.  The grid form
    tilts by a functional whose discrete-law variance is the compensator,
    so its mean is exactly 1 up to Monte Carlo noise.  The continuum form
    is the log-density helper from the operator module (far-corner field
    value over epsilon, quadrature inverse-kernel norm as compensator);
    its mean is predicted by the normal moment formula rather than pinned
    at 1, and it is checked against that prediction.  Pass metrics ride on
    the grid form.
    """
    if settings.beta is None:
        raise ValueError("the change-of-measure check needs a sheet model")
    OperatorRegime.from_exponents(settings.alpha, settings.beta)
    t0 = time.perf_counter()
    alpha, beta, T, eps = settings.alpha, settings.beta, settings.T, settings.epsilon
    n = settings.grid_n
    if n < 2 or n % 2:
        raise ValueError("grid_n must be even and >= 2 for the refinement check")
    grid = build_grid2d(n, n, T)

    # tilting functional: xi = a' Z b reproduces E[W_{s,t} xi] = s t at nodes
    Ls = np.linalg.cholesky(fbm_covariance(alpha, grid.s[1:]))
    Lt = np.linalg.cholesky(fbm_covariance(beta, grid.t[1:]))
    avec = sla.solve_triangular(Ls, grid.s[1:], lower=True)
    bvec = sla.solve_triangular(Lt, grid.t[1:], lower=True)
    grid_norm_sq = float(avec @ avec) * float(bvec @ bvec)
    quad_norm_sq = rkhs_norm_sq_separable(alpha, beta, T)
    coarse = kinv_norm_sq_discrete(alpha, beta, build_grid2d(n // 2, n // 2, T))
    fine = kinv_norm_sq_discrete(alpha, beta, grid)
    refine_change = abs(fine - coarse) / coarse

    row_s, row_t = Ls[-1, :], Lt[-1, :]

    def work(idx: int, count: int):
        rng = RngStreamSpec(settings.seed, idx).generator()
        z = rng.standard_normal((count, n, n))
        w_tt = row_s @ z @ row_t
        xi = avec @ z @ bvec
        dens_grid = np.exp(xi / eps - grid_norm_sq / (2.0 * eps * eps))
        dens_quad = np.exp(w_tt / eps - quad_norm_sq / (2.0 * eps * eps))
        shifted = dens_grid * (w_tt - T * T / eps)
        return (
            _moments(dens_grid),
            _moments(dens_quad),
            _moments(shifted),
            float(np.square(dens_grid).sum()),
        )

    parts = _map_chunks(work, settings.samples, settings.threads)
    mean_grid = _combine_moments([p_[0] for p_ in parts], settings.seed)
    mean_quad = _combine_moments([p_[1] for p_ in parts], settings.seed)
    mean_shift = _combine_moments([p_[2] for p_ in parts], settings.seed)
    sum_d = mean_grid.estimate * settings.samples
    sum_d2 = math.fsum(p_[3] for p_ in parts)
    ess = sum_d * sum_d / sum_d2 if sum_d2 > 0 else 0.0
    predicted_quad = math.exp(
        (T ** (2 * alpha + 2 * beta) - quad_norm_sq) / (2.0 * eps * eps)
    )

    metrics = (
        MetricResult(
            name="density_mean",
            value=mean_grid.estimate,
            tolerance="within 4 standard errors of 1",
            passed=_within_se(mean_grid.estimate, 1.0, mean_grid.std_error, 4.0),
            seed=settings.seed,
            std_error=mean_grid.std_error,
            target=1.0,
        ),
        MetricResult(
            name="shifted_field_mean",
            value=mean_shift.estimate,
            tolerance="within 4 standard errors of 0",
            passed=_within_se(mean_shift.estimate, 0.0, mean_shift.std_error, 4.0),
            seed=settings.seed,
            std_error=mean_shift.std_error,
            target=0.0,
        ),
        MetricResult(
            name="density_mean_continuum_norm",
            value=mean_quad.estimate,
            tolerance="within 4 standard errors of its predicted mean",
            passed=_within_se(
                mean_quad.estimate, predicted_quad, mean_quad.std_error, 4.0
            ),
            seed=settings.seed,
            std_error=mean_quad.std_error,
            target=predicted_quad,
            detail={
                "norm_sq_grid": grid_norm_sq,
                "norm_sq_quadrature": quad_norm_sq,
            },
        ),
        MetricResult(
            name="inverse_norm_refinement",
            value=refine_change,
            tolerance="relative change < 5% under 2x refinement",
            passed=refine_change < 0.05,
            seed=settings.seed,
            detail={"coarse": coarse, "fine": fine},
        ),
        MetricResult(
            name="effective_sample_share",
            value=ess / settings.samples,
            tolerance="reported only (importance-sampling variance monitor)",
            passed=True,
            seed=settings.seed,
        ),
    )
    tables = {
        "girsanov": (
            ["metric", "value", "std_error", "target"],
            [
                ("density_mean", mean_grid.estimate, mean_grid.std_error, 1.0),
                ("shifted_field_mean", mean_shift.estimate, mean_shift.std_error, 0.0),
                (
                    "density_mean_continuum_norm",
                    mean_quad.estimate,
                    mean_quad.std_error,
                    predicted_quad,
                ),
            ],
        )
    }
    return ExperimentReport(
        experiment="girsanov-check",
        parameters=_echo(settings),
        metrics=metrics,
        wall_seconds=time.perf_counter() - t0,
        tables=tables,
    )


# ----------------------------------------------------------------------------
# Operator identity suite
# ----------------------------------------------------------------------------

def _corrupt_indicator_norm(alpha: float, t: float) -> float:
    # deliberately ungraded rule; misses the endpoint singularity
    nodes, weights = gauss_legendre_01(8)
    spec = VolterraKernelSpec.calibrated(alpha)
    vals = volterra_kernel(spec, t, t * nodes) ** 2
    return float(t * np.sum(weights * vals))


def cmd_operator_check(settings: RunSettings) -> ExperimentReport:
    """Battery of fractional-operator identities at one Hurst exponent.

    Covers the isometry normalisation of the adjoint-kernel map, the
    derivative-after-integral round trip, the slope of the gap integral,
    and agreement of the two inverse-operator regimes near 1/2.  The
    ``debug_corrupt_quadrature`` flag swaps in an ungraded quadrature for
    the norm identity so harness sensitivity can be demonstrated.
    """
    t0 = time.perf_counter()
    alpha, T = settings.alpha, settings.T
    metrics = []

    if settings.debug_corrupt_quadrature:
        norm_fn = _corrupt_indicator_norm
    else:
        spec = VolterraKernelSpec.calibrated(alpha)
        norm_fn = lambda _, t: kstar_indicator_norm_sq(spec, t, T)
    norm_err = max(
        abs(norm_fn(alpha, t) - t ** (2.0 * alpha)) for t in (0.5 * T, T)
    )
    metrics.append(
        MetricResult(
            name="indicator_norm_identity",
            value=norm_err,
            tolerance="< 1e-4",
            passed=norm_err < 1e-4,
            seed=settings.seed,
            detail={"corrupted": settings.debug_corrupt_quadrature},
        )
    )

    g = build_grid2d(16, 16, 1.0)
    uv = g.s[:, None] * g.t[None, :]
    f = GridFunction2D(g, 1.0 + uv)
    gg = (0.35, 0.45) if abs(alpha - 0.5) < 1e-12 else (min(alpha, 0.99), 0.45)
    roundtrip = frac_derivative_2d(
        frac_integral_2d(f, *gg, origin_power=None), *gg, origin_power=(gg[0], gg[1])
    )
    err_rt = float(
        np.max(np.abs(roundtrip.samples[1:, 1:] - (1.0 + uv)[1:, 1:]))
    )
    metrics.append(
        MetricResult(
            name="derivative_integral_roundtrip",
            value=err_rt,
            tolerance="< 1e-4 at interior nodes",
            passed=err_rt < 1e-4,
            seed=settings.seed,
            detail={"orders": gg},
        )
    )

    one = GridFunction2D(g, np.ones((17, 17)))
    xy = frac_integral_2d(one, 1.0, 1.0)
    err_xy = float(np.max(np.abs(xy.samples - uv)))
    metrics.append(
        MetricResult(
            name="unit_orders_integral",
            value=err_xy,
            tolerance="< 1e-12 (exact product rule)",
            passed=err_xy < 1e-12,
            seed=settings.seed,
        )
    )

    if abs(alpha - 0.5) > 1e-12:
        ts = np.array([0.25, 0.5, 1.0])
        # the gap integrand flips sign across 1/2; the scaling law is in |J|
        vals = np.abs([power_gap_integral(alpha, t) for t in ts])
        slope = float(np.polyfit(np.log(ts), np.log(vals), 1)[0])
        target = 1.0 - 2.0 * alpha
        metrics.append(
            MetricResult(
                name="gap_integral_slope",
                value=slope,
                tolerance="within 0.02 of 1 - 2 alpha",
                passed=abs(slope - target) < 0.02,
                seed=settings.seed,
                target=target,
            )
        )

    g16 = build_grid2d(16, 16, 1.0)
    lo = kinv_apply_F(0.45, 0.45, g16).samples
    hi = kinv_apply_F(0.55, 0.55, g16).samples
    sel = [8, 10]  # nodes 0.5, 0.625: where both regime branches are flat
    gap = float(max(abs(lo[i, j] - hi[i, j]) for i in sel for j in sel))
    metrics.append(
        MetricResult(
            name="regime_limit_consistency",
            value=gap,
            tolerance="< 0.05 at central nodes (0.45 vs 0.55)",
            passed=gap < 0.05,
            seed=settings.seed,
        )
    )

    tables = {
        "operator_checks": (
            ["check", "value", "passed"],
            [(m.name, m.value, m.passed) for m in metrics],
        )
    }
    return ExperimentReport(
        experiment="operator-check",
        parameters=_echo(settings),
        metrics=tuple(metrics),
        wall_seconds=time.perf_counter() - t0,
        tables=tables,
    )


# ----------------------------------------------------------------------------
# Field sampling and covariance validation
# ----------------------------------------------------------------------------

def cmd_simulate(settings: RunSettings) -> ExperimentReport:
    """Sample driving fields, dump one trajectory, validate covariances.

    One-parameter mode checks the empirical covariance matrix against the
    closed form at every node pair (5 standard errors); sheet mode checks
    the variance at the far corner against T^{2 alpha + 2 beta} (4 standard
    errors) plus decorrelation of two disjoint rectangle increments.
    """
    t0 = time.perf_counter()
    if settings.beta is None:
        report = _simulate_line(settings)
    else:
        report = _simulate_sheet(settings)
    return ExperimentReport(
        experiment="simulate",
        parameters=_echo(settings),
        metrics=report[0],
        wall_seconds=time.perf_counter() - t0,
        tables=report[1],
    )


def _simulate_line(settings: RunSettings):
    grid = build_grid(settings.grid_n, settings.T)
    factor = factor_covariance(settings.alpha, grid)

    def work(idx: int, count: int):
        values, _ = sample_fbm_batch(factor, count, RngStreamSpec(settings.seed, idx))
        first = values[0] if idx == 0 else None
        # (B_s B_u)^2 = B_s^2 B_u^2, so the product-estimator variance needs
        # only the elementwise-squared Gram matrix
        sq = values**2
        return count, values.T @ values, sq.T @ sq, first

    parts = _map_chunks(work, settings.samples, settings.threads)
    n = sum(p_[0] for p_ in parts)
    cross = np.sum([p_[1] for p_ in parts], axis=0) / n
    sq = np.sum([p_[2] for p_ in parts], axis=0) / n
    path0 = parts[0][3]
    exact = cov_fbm(settings.alpha, grid.points[:, None], grid.points[None, :])
    se = np.sqrt(np.maximum(sq - cross**2, 0.0) / n)
    with np.errstate(invalid="ignore", divide="ignore"):
        z = np.abs(cross - exact) / se
    z[se == 0.0] = 0.0
    max_z = float(np.nanmax(z))
    metrics = (
        MetricResult(
            name="covariance_max_z",
            value=max_z,
            tolerance="all node pairs within 5 standard errors",
            passed=max_z < 5.0,
            seed=settings.seed,
            detail={"replicas": n},
        ),
    )
    tables = {
        "sample_path": (
            ["t", "value"],
            [(float(t), float(v)) for t, v in zip(grid.points, path0)],
        ),
        "covariance": (
            ["s", "u", "empirical", "exact", "std_error"],
            [
                (float(grid.points[i]), float(grid.points[j]), float(cross[i, j]),
                 float(exact[i, j]), float(se[i, j]))
                for i in range(grid.n_steps + 1)
                for j in range(i, grid.n_steps + 1)
            ],
        ),
    }
    return metrics, tables


def _simulate_sheet(settings: RunSettings):
    grid = build_grid2d(settings.grid_n, settings.grid_n, settings.T)
    alpha, beta = settings.alpha, settings.beta

    def work(idx: int, count: int):
        values, _ = sample_sheet_batch(
            alpha, beta, grid, count, RngStreamSpec(settings.seed, idx)
        )
        corner = values[:, -1, -1]
        half_s, half_t = grid.n_s // 2, grid.n_t // 2
        inc_a = values[:, half_s, half_t]
        inc_b = (
            values[:, -1, -1] - values[:, half_s, -1]
            - values[:, -1, half_t] + values[:, half_s, half_t]
        )
        first = values[0] if idx == 0 else None
        return (
            _moments(corner**2),
            _moments(inc_a * inc_b),
            first,
        )

    parts = _map_chunks(work, settings.samples, settings.threads)
    var_corner = _combine_moments([p_[0] for p_ in parts], settings.seed)
    decorr = _combine_moments([p_[1] for p_ in parts], settings.seed)
    sheet0 = parts[0][2]
    target = settings.T ** (2.0 * alpha + 2.0 * beta)
    # product covariance of the two rectangle increments; zero exactly at
    # Hurst (1/2, 1/2), nonzero otherwise by long-range dependence
    s_half = grid.s[grid.n_s // 2]
    t_half = grid.t[grid.n_t // 2]
    inc_target = (
        cov_fbm(alpha, s_half, grid.T) - cov_fbm(alpha, s_half, s_half)
    ) * (cov_fbm(beta, t_half, grid.T) - cov_fbm(beta, t_half, t_half))
    metrics = (
        MetricResult(
            name="corner_variance",
            value=var_corner.estimate,
            tolerance="within 4 standard errors of T^(2 alpha + 2 beta)",
            passed=_within_se(var_corner.estimate, target, var_corner.std_error, 4.0),
            seed=settings.seed,
            std_error=var_corner.std_error,
            target=target,
        ),
        MetricResult(
            name="disjoint_increment_covariance",
            value=decorr.estimate,
            tolerance="within 4 standard errors of the product-covariance value",
            passed=_within_se(decorr.estimate, inc_target, decorr.std_error, 4.0),
            seed=settings.seed,
            std_error=decorr.std_error,
            target=float(inc_target),
        ),
    )
    tables = {
        "sample_sheet": (
            ["s", "t", "value"],
            [
                (float(grid.s[i]), float(grid.t[j]), float(sheet0[i, j]))
                for i in range(grid.n_s + 1)
                for j in range(grid.n_t + 1)
            ],
        )
    }
    return metrics, tables


def _echo(settings: RunSettings, **overrides) -> dict:
    params = asdict(settings)
    params.update(overrides)
    return params
