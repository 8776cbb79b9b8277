"""Special functions underlying the chaos kernels and the noise representation.

Three families live here:

* ``h0`` -- the entire function h0(x) = sum_n x^n / (n!)^2.  It is the
  deterministic profile of the sheet equation and the building block of the
  sheet chaos kernels.  On the negative axis it oscillates and dips below
  zero; ``negativity_interval`` locates the deepest negative window.

* probabilist Hermite polynomials H_n (three-term recurrence), which turn
  one-parameter chaos sums into closed form.

* the Volterra kernel K(t, s) = d [(t-s)^{alpha-1/2}
  + s^{alpha-1/2} (1/2-alpha) int_0^{t/s-1} th^{alpha-3/2}
  (1 - (1+th)^{alpha-1/2}) d th]
  of the moving-average representation of fractional Brownian motion.  The
  constant ``d`` is fixed numerically by the variance calibration
  int_0^1 K(1, s)^2 ds = 1, which forces Var B_t = t^{2 alpha}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .quad import gauss_legendre_01, graded_nodes, integrate_graded

__all__ = [
    "NoInterval",
    "DomainError",
    "CalibrationFailed",
    "h0",
    "h0_array",
    "NegativityInterval",
    "negativity_interval",
    "hermite",
    "hermite_all",
    "VolterraKernelSpec",
    "volterra_kernel",
    "volterra_kernel_dt",
    "volterra_kernel_dt_dist",
    "calibrate_d_alpha",
    "kernel_sq_grade",
    "kernel_sq_integral",
]


class NoInterval(ValueError):
    """Requested depth exceeds the deepest value h0 attains below zero."""


class DomainError(ValueError):
    """Kernel evaluated outside 0 < s < t."""


class CalibrationFailed(RuntimeError):
    """Root solve for the kernel normalisation constant did not converge."""


# ----------------------------------------------------------------------------
# h0 and its negative window
# ----------------------------------------------------------------------------

def h0(x: float) -> float:
    """h0(x) = sum_{n>=0} x^n/(n!)^2 by direct series, Kahan-compensated.

    Terms alternate for x < 0; summation stops once terms fall below
    1e-16 of the running sum and the index has cleared the growth region.
    Raises OverflowError when the value exceeds float range (x ~ 1.26e5).

    Cancellation bounds the absolute accuracy for x < 0 by roughly
    eps * max_n |x|^n/(n!)^2 ~ eps * e^{2 sqrt(|x|)}: full precision up to
    |x| ~ 50, ~1e-7 at |x| = 100.  Solver arguments stay well inside that.
    """
    x = float(x)
    s = 1.0
    comp = 0.0
    term = 1.0
    n = 0
    n_min = math.sqrt(abs(x)) + 40.0
    while True:
        n += 1
        term *= x / (n * n)
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        if not math.isfinite(s):
            raise OverflowError(f"h0({x}) exceeds float range")
        if n > n_min and abs(term) < 1e-16 * abs(s):
            break
        if n > 200_000:  # unreachable for finite results; safety stop
            break
    return s


def h0_array(x: np.ndarray) -> np.ndarray:
    """Vectorised h0 via Horner evaluation with a shared term count.

    Intended for the bounded arguments that occur in kernels and solvers
    (|x| up to a few hundred); the term count follows the largest argument.
    """
    x = np.asarray(x, dtype=float)
    m = float(np.max(np.abs(x))) if x.size else 0.0
    if m > 1e4:
        raise OverflowError("h0_array arguments too large; use scalar h0")
    n_terms = int(2.0 * math.sqrt(m)) + 30
    c = 1.0
    coeffs = [1.0]
    for n in range(1, n_terms + 1):
        c /= n * n
        coeffs.append(c)
    out = np.zeros_like(x)
    for c in reversed(coeffs):
        out = out * x + c
    return out


@lru_cache(maxsize=1)
def _h0_negative_window() -> tuple[float, float, float, float]:
    """(lo0, hi0, xmin, fmin): the first window with h0 < 0 and its bottom."""
    hi0 = brentq(h0, -2.5, -1.0, xtol=1e-14)
    lo0 = brentq(h0, -8.2, -6.5, xtol=1e-14)
    r = minimize_scalar(h0, bounds=(lo0, hi0), method="bounded",
                        options={"xatol": 1e-12})
    return lo0, hi0, float(r.x), float(r.fun)


@dataclass(frozen=True)
class NegativityInterval:
    """Open interval (lo, hi) on the negative axis with h0 < -depth throughout."""

    lo: float
    hi: float
    depth: float

    def __post_init__(self) -> None:
        if not (self.lo < self.hi < 0.0):
            raise ValueError("interval must satisfy lo < hi < 0")
        if self.depth < 0.0:
            raise ValueError("depth must be non-negative")


def negativity_interval(delta: float) -> NegativityInterval:
    """Maximal open subinterval of the first negative window with h0 < -delta.

    For delta = 0 this is the window between the two zeros of h0 closest to
    the origin.  Raises NoInterval when delta reaches the window's depth
    (about 0.402759, the magnitude of the global minimum of h0).
    """
    if delta < 0.0:
        raise ValueError(f"delta={delta} must be >= 0")
    lo0, hi0, xmin, fmin = _h0_negative_window()
    if delta >= -fmin:
        raise NoInterval(f"h0 never goes below {-delta:.6f}; floor is {fmin:.6f}")
    if delta == 0.0:
        return NegativityInterval(lo0, hi0, 0.0)
    f = lambda x: h0(x) + delta
    lo = brentq(f, lo0, xmin, xtol=1e-13)
    hi = brentq(f, xmin, hi0, xtol=1e-13)
    return NegativityInterval(lo, hi, delta)


# ----------------------------------------------------------------------------
# probabilist Hermite polynomials
# ----------------------------------------------------------------------------

def hermite(n: int, x: float) -> float:
    """H_n(x) with H_{n+1} = x H_n - n H_{n-1}, H_0 = 1, H_1 = x."""
    if n < 0:
        raise ValueError("order must be >= 0")
    if n == 0:
        return 1.0
    hm, h = 1.0, float(x)
    for k in range(1, n):
        hm, h = h, x * h - k * hm
    return h


def hermite_all(n_max: int, x: np.ndarray) -> np.ndarray:
    """All orders 0..n_max at once; shape (n_max+1,) + x.shape."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for k in range(1, n_max):
        out[k + 1] = x * out[k] - k * out[k - 1]
    return out


# ----------------------------------------------------------------------------
# Volterra kernel of the fBm representation
# ----------------------------------------------------------------------------

def _f1_integral(alpha: float, z: np.ndarray, nq: int) -> np.ndarray:
    """int_0^{z-1} th^{alpha-3/2} (1 - (1+th)^{alpha-1/2}) d th for z >= 1.

    Near th = 0 the integrand behaves like (1/2-alpha) th^{alpha-1/2}; the
    substitution th = u^{1/(alpha+1/2)} removes that power.  The bracket is
    evaluated as -expm1((alpha-1/2) log1p(th)) to avoid cancellation.  For
    z - 1 > 1 the tail over [1, z-1] is integrated in log coordinates.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    q = alpha - 0.5
    out = np.zeros_like(z)
    U = z - 1.0
    pos = U > 0.0
    if not np.any(pos):
        return out

    def bracket(th: np.ndarray) -> np.ndarray:
        return -np.expm1(q * np.log1p(th))

    u, w = gauss_legendre_01(nq)
    p = 1.0 / (alpha + 0.5)
    # near piece: [0, min(U, 1)]
    A = np.minimum(U[pos], 1.0)
    th = (A[:, None] * u[None, :] ** p)
    vals = th ** (alpha - 1.5) * bracket(th)
    jac = A[:, None] * p * u[None, :] ** (p - 1.0)
    near = (vals * jac) @ w
    # far piece: [1, U] in log coordinates, only where U > 1
    far = np.zeros_like(near)
    big = U[pos] > 1.0
    if np.any(big):
        L = np.log(U[pos][big])
        y = L[:, None] * u[None, :]
        th = np.exp(y)
        vals = th ** (alpha - 0.5) * bracket(th)  # extra th from d th = th dy
        far[big] = (vals @ w) * L
    out[pos] = near + far
    return out


@dataclass(frozen=True)
class VolterraKernelSpec:
    """Kernel parameters: Hurst exponent, normalisation, quadrature resolution."""

    alpha: float
    d_alpha: float
    quadrature_n: int = 160

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha={self.alpha} not in (0, 1)")
        if self.d_alpha <= 0.0:
            raise ValueError("d_alpha must be positive")
        if self.quadrature_n < 8:
            raise ValueError("quadrature_n too small")

    @classmethod
    def calibrated(cls, alpha: float, quadrature_n: int = 160) -> "VolterraKernelSpec":
        return cls(alpha, calibrate_d_alpha(alpha), quadrature_n)


def volterra_kernel(spec: VolterraKernelSpec, t: float, s: np.ndarray) -> np.ndarray:
    """K(t, s) for 0 < s < t; vectorised over s."""
    s = np.asarray(s, dtype=float)
    if not t > 0.0:
        raise DomainError(f"t={t} must be > 0")
    if np.any(s <= 0.0) or np.any(s >= t):
        raise DomainError("kernel requires 0 < s < t")
    a = spec.alpha
    q = a - 0.5
    if a == 0.5:
        return np.full_like(s, spec.d_alpha)
    corr = spec.d_alpha * (0.5 - a) * _f1_integral(a, t / s, spec.quadrature_n)
    return spec.d_alpha * (t - s) ** q + s**q * corr


def volterra_kernel_dt(spec: VolterraKernelSpec, r: np.ndarray, s: float) -> np.ndarray:
    """dK/dr (r, s) = d (alpha-1/2) (r-s)^{alpha-3/2} (r/s)^{alpha-1/2}.

    Closed form obtained by differentiating the kernel in its first argument;
    the two pieces of K collapse into a single power product.
    """
    r = np.asarray(r, dtype=float)
    if not s > 0.0 or np.any(r <= s):
        raise DomainError("derivative requires 0 < s < r")
    return volterra_kernel_dt_dist(spec, r - s, s)


def volterra_kernel_dt_dist(spec: VolterraKernelSpec, dist: np.ndarray, s: float) -> np.ndarray:
    """dK/dr (s + dist, s) parametrised by the exact gap dist = r - s > 0.

    Quadratures that grade into the r -> s singularity construct the gap
    directly; recomputing r - s by subtraction there would leave only noise.
    """
    dist = np.asarray(dist, dtype=float)
    if not s > 0.0 or np.any(dist <= 0.0):
        raise DomainError("derivative requires 0 < s and dist > 0")
    a = spec.alpha
    if a == 0.5:
        return np.zeros_like(dist)
    return (
        spec.d_alpha * (a - 0.5) * dist ** (a - 1.5) * (1.0 + dist / s) ** (a - 0.5)
    )


def kernel_sq_grade(alpha: float) -> float:
    """Endpoint grading exponent for integrands built from squared kernels.

    Near either endpoint K^2 expands in powers from the lattice
    {2q, q, 0} + N with q = alpha - 1/2, the worst singular term being
    x^{2q} when q < 0.  The substitution power p resolves the q-lattice
    (p = 1/|q|) and is raised when needed so the x^{2q} factor maps to a
    positive power.  Returned as the equivalent exponent e = 1/p - 1.
    """
    q = alpha - 0.5
    if q == 0.0:
        return 0.0
    p = 1.0 / abs(q)
    if q < 0.0:
        p = max(p, 1.5 / (1.0 + 2.0 * q))
    # any p >= 1/(1+2q) already bounds the transformed integrand; unbounded p
    # (alpha -> 1/2) would underflow the innermost node u_min^p to exactly 0
    p = min(p, 32.0)
    return 1.0 / p - 1.0


def kernel_sq_integral(spec: VolterraKernelSpec, t: float, tol: float = 1e-10) -> float:
    """int_0^t K(t, s)^2 ds, graded at both endpoints for the kernel powers."""
    e = kernel_sq_grade(spec.alpha)
    f = lambda s: volterra_kernel(spec, t, s) ** 2
    return integrate_graded(f, 0.0, t, e_a=e, e_b=e, n0=96, tol=tol)


@lru_cache(maxsize=32)
def calibrate_d_alpha(alpha: float) -> float:
    """Normalisation d with int_0^1 K(1, s)^2 ds = 1, by 1-d root solve.

    The integral is proportional to d^2 (both kernel pieces carry d), so the
    equation has a unique positive root; brentq brackets it from the d = 1
    integral value.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha={alpha} not in (0, 1)")
    if alpha == 0.5:
        return 1.0
    probe = VolterraKernelSpec(alpha, 1.0)
    try:
        q1 = kernel_sq_integral(probe, 1.0)
        if not (np.isfinite(q1) and q1 > 0.0):
            raise CalibrationFailed(f"reference integral {q1} invalid")
        root = brentq(lambda d: d * d * q1 - 1.0, 1e-6, 1e6, xtol=1e-14, rtol=1e-15)
    except (ValueError, RuntimeError) as exc:
        raise CalibrationFailed(f"calibration failed for alpha={alpha}: {exc}") from exc
    return float(root)
