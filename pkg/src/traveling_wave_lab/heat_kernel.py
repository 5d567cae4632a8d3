# src/traveling_wave_lab/heat_kernel.py

"""
Heat kernels G^a_θ(·, t) = F^{-1}[exp(t ψ^a_θ)] of the Riesz-Feller semigroups.

The density is obtained by an inverse FFT on [-L, L). The periodic window
folds the algebraic tails of the kernel back onto itself; the folded images
are removed with the leading terms of the large-|x| expansion

    G(x, t) ~ Σ_k R_k t^k x^{-ka-1}    (x → +∞),  L_k the same with (a+θ) for x → -∞,

summed over all images in closed form with the Hurwitz zeta function.
For a ≤ 1 the expansion converges and is summed until its terms drop below
round-off; for 1 < a < 2 it is only asymptotic and two terms are kept.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Iterable

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline
from scipy.signal import fftconvolve
from scipy.special import gamma, gammaln, zeta
from tqdm import tqdm

from . import config
from .errors import ConfigError, ResolutionError, UnsupportedParameterError
from .grids import ProfileGrid
from .levy_ops import RieszFellerParams, rf_symbol

logger = logging.getLogger(__name__)

# exp(-27.63) ≈ 1e-12: decay of the symbol required at the Nyquist wavenumber
NYQUIST_DECAY = -math.log(1e-12)
NEGATIVE_TOL = 1e-8
WIDTH_FACTOR = 64.0
MIN_WIDTH_FACTOR = 4.0
SERIES_TOL = 1e-16
MAX_SERIES_TERMS = 60
MAX_SEMIGROUP_POINTS = 2**18

# diamond points used by the property sweeps
DEFAULT_DIAMOND_POINTS: tuple[tuple[float, float], ...] = (
    (2.0, 0.0),
    (1.9, 0.0),
    (1.9, 0.1),
    (1.5, 0.0),
    (1.5, 0.3),
    (1.5, -0.5),
    (1.2, -0.4),
    (1.2, 0.6),
    (1.0, 0.0),
    (1.0, 0.5),
    (0.8, 0.4),
    (0.5, -0.5),
)


@dataclass(frozen=True, eq=False)
class KernelSample:
    """
    Samples of G(x, t) on x_j = -L + j·dx, j = 0..n-1.

    ``density`` has the periodic images removed; ``aliasing`` holds what was
    subtracted, so ``density + aliasing`` is the raw periodized FFT output.
    """

    params: RieszFellerParams
    t: float
    L: float
    n: int
    density: np.ndarray
    aliasing: np.ndarray

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.n)

    @property
    def periodized(self) -> np.ndarray:
        return self.density + self.aliasing

    @property
    def window_mass(self) -> float:
        """Trapezoidal mass on [-L, L]; the value at x = L comes from the periodized sample at -L."""
        at_L = self.periodized[0] - image_sum(self.params, self.t, np.array([self.L]), self.L)[0]
        return float((np.sum(self.density) + 0.5 * (at_L - self.density[0])) * self.dx)

    @property
    def mass(self) -> float:
        """Mass inside the window plus the analytic tail mass outside it."""
        left, right = tail_masses(self.params, self.t, self.L)
        return self.window_mass + left + right

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x, "density": self.density})


# ---------- resolution ----------


def _series_terms(p: RieszFellerParams, t: float, L: float) -> int:
    """Terms of the tail expansion needed at distance L from the origin."""
    if p.a == 2.0:
        return 0
    if p.a > 1.0:
        return 2
    log_ratio = math.log(t) - p.a * math.log(L)
    for k in range(5, MAX_SERIES_TERMS + 1):
        size = gammaln(k * p.a + 1.0) - gammaln(k + 1.0) + k * log_ratio
        if size < math.log(SERIES_TOL):
            return k
    logger.warning("tail expansion not converged after %d terms (t L^-a = %.3g)", MAX_SERIES_TERMS, math.exp(log_ratio))
    return MAX_SERIES_TERMS


def _series_coeffs(p: RieszFellerParams, t: float, L: float) -> tuple[np.ndarray, np.ndarray]:
    """(R_k, L_k), k = 1..terms, of the right and left tail expansions."""
    k = np.arange(1, _series_terms(p, t, L) + 1, dtype=float)
    common = (-1.0) ** (k + 1) / gamma(k + 1.0) * gamma(k * p.a + 1.0) / math.pi
    right = common * np.sin(k * math.pi * (p.a - p.theta) / 2.0)
    left = common * np.sin(k * math.pi * (p.a + p.theta) / 2.0)
    return right, left


def required_wavenumber(p: RieszFellerParams, t: float) -> float:
    """Smallest k with exp(t Re ψ(k)) ≤ 1e-12."""
    damping = t * math.cos(p.theta * math.pi / 2.0)
    return (NYQUIST_DECAY / damping) ** (1.0 / p.a)


def max_resolved_L(p: RieszFellerParams, t: float, n: int) -> float:
    """Largest half-width whose Nyquist wavenumber π n/(2L) still resolves the symbol."""
    return math.pi * n / (2.0 * required_wavenumber(p, t))


def default_L(p: RieszFellerParams, t: float, n: int) -> float:
    return min(max_resolved_L(p, t, n), WIDTH_FACTOR * t ** (1.0 / p.a))


def _check_inputs(p: RieszFellerParams, t: float, n: int) -> None:
    if not p.nontrivial:
        raise UnsupportedParameterError(
            "trivial parameters (1, ±1) have delta kernels", a=p.a, theta=p.theta
        )
    if not (t > 0 and math.isfinite(t)):
        raise ConfigError(f"time must be positive, got {t}", t=t)
    if n < 64 or n & (n - 1):
        raise ConfigError(f"kernel grid size must be a power of two ≥ 64, got {n}", n=n)


def _resolve_L(p: RieszFellerParams, t: float, n: int, L: float | None) -> float:
    L_max = max_resolved_L(p, t, n)
    L_min = MIN_WIDTH_FACTOR * t ** (1.0 / p.a)
    if L is None:
        L = default_L(p, t, n)
    if L > L_max:
        raise ResolutionError(
            f"L = {L:.4g} under-resolves the symbol at Nyquist for n = {n}",
            suggested_L=L_max,
            a=p.a,
            theta=p.theta,
            t=t,
        )
    if L < L_min:
        need = 2 ** math.ceil(math.log2(n * L_min / L_max)) if L_max < L_min else n
        raise ResolutionError(
            f"window [-{L:.4g}, {L:.4g}) is narrower than {MIN_WIDTH_FACTOR} t^(1/a)",
            suggested_L=L_min,
            suggested_n=int(need),
            a=p.a,
            theta=p.theta,
            t=t,
        )
    return float(L)


# ---------- kernel ----------


def image_sum(p: RieszFellerParams, t: float, x: np.ndarray, L: float) -> np.ndarray:
    """Σ_{m≥1} [G(x + 2Lm) + G(x - 2Lm)] from the tail expansions (zero for a = 2)."""
    out = np.zeros_like(x, dtype=float)
    right, left = _series_coeffs(p, t, L)
    period = 2.0 * L
    for k, (rk, lk) in enumerate(zip(right, left), start=1):
        s = k * p.a + 1.0
        scale = t**k * period ** (-s)
        if rk != 0.0:
            out += scale * rk * zeta(s, 1.0 + x / period)
        if lk != 0.0:
            out += scale * lk * zeta(s, 1.0 - x / period)
    return out


def tail_masses(p: RieszFellerParams, t: float, L: float) -> tuple[float, float]:
    """(mass on x < -L, mass on x > L) from the tail expansions."""
    right, left = _series_coeffs(p, t, L)
    k = np.arange(1, right.size + 1, dtype=float)
    factor = t**k * L ** (-k * p.a) / (k * p.a)
    return float(np.sum(left * factor)), float(np.sum(right * factor))


def compute_kernel(
    p: RieszFellerParams,
    t: float,
    L: float | None = None,
    n: int | None = None,
) -> KernelSample:
    n = int(n or config.KERNEL_POINTS)
    _check_inputs(p, t, n)
    L = _resolve_L(p, t, n, L)
    dx = 2.0 * L / n
    kappa = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)

    spectrum = np.exp(t * rf_symbol(p, -kappa))
    spectrum[n // 2] = spectrum[n // 2].real
    raw = np.fft.fftshift(np.fft.ifft(spectrum)) / dx
    logger.debug("kernel (a=%s, θ=%s, t=%s): imaginary residue %.2e", p.a, p.theta, t, np.max(np.abs(raw.imag)))

    x = -L + dx * np.arange(n)
    aliasing = image_sum(p, t, x, L)
    density = raw.real - aliasing
    low = float(np.min(density))
    if low < -NEGATIVE_TOL:
        raise ResolutionError(
            f"kernel density dips to {low:.3e} below -{NEGATIVE_TOL:g}",
            suggested_L=L / 2.0,
            a=p.a,
            theta=p.theta,
            t=t,
        )
    return KernelSample(params=p, t=float(t), L=L, n=n, density=density, aliasing=aliasing)


def gaussian_density(x: np.ndarray, t: float) -> np.ndarray:
    return np.exp(-(x**2) / (4.0 * t)) / np.sqrt(4.0 * np.pi * t)


# ---------- property checks ----------


def check_scaling(p: RieszFellerParams, t: float, n: int | None = None, L: float | None = None) -> float:
    """
    sup |G(x,t) - t^{-1/a} G(x t^{-1/a}, 1)| on the inner half of both windows.

    G(·, t) is sampled on [-L, L) with n points (default window if L is None);
    the reference G(·, 1) on its own default window with 2n points, so a
    poorly chosen window or resolution for G(·, t) shows up in the deviation.
    """
    n = int(n or config.KERNEL_POINTS)
    g_t = compute_kernel(p, t, L=L, n=n)
    g_1 = compute_kernel(p, 1.0, n=2 * n)
    stretch = t ** (1.0 / p.a)
    spline = CubicSpline(g_1.x, g_1.density)
    radius = 0.5 * min(g_t.L, g_1.L * stretch)
    inside = np.abs(g_t.x) <= radius
    x = g_t.x[inside]
    predicted = spline(x / stretch) / stretch
    return float(np.max(np.abs(g_t.density[inside] - predicted)))


def check_semigroup(p: RieszFellerParams, s: float, t: float, n: int | None = None) -> float:
    """
    sup |G(·,s)∗G(·,t) - G(·,s+t)| on |x| ≤ L/4, all three kernels on one window.

    The window must resolve the symbol at min(s, t) and still be twice the
    minimal width at s + t; n is doubled until both hold (heavy-tailed a < 1).
    """
    n = int(n or config.KERNEL_POINTS)
    _check_inputs(p, min(s, t), n)
    needed = 2.0 * MIN_WIDTH_FACTOR * (s + t) ** (1.0 / p.a)
    while max_resolved_L(p, min(s, t), n) < needed:
        if n >= MAX_SEMIGROUP_POINTS:
            raise ResolutionError(
                f"no window up to n = {n} resolves both time scales",
                suggested_L=needed,
                a=p.a,
                theta=p.theta,
                t=s + t,
            )
        n *= 2
        logger.info("semigroup check raised to n = %d for (a=%s, θ=%s)", n, p.a, p.theta)
    L = min(max_resolved_L(p, min(s, t), n), 2.0 * WIDTH_FACTOR * (s + t) ** (1.0 / p.a))
    g_s = compute_kernel(p, s, L=L, n=n)
    g_t = compute_kernel(p, t, L=L, n=n)
    g_st = compute_kernel(p, s + t, L=L, n=n)
    conv = fftconvolve(g_s.density, g_t.density)[n // 2 : n // 2 + n] * g_s.dx
    inside = np.abs(g_st.x) <= L / 4.0
    return float(np.max(np.abs(conv[inside] - g_st.density[inside])))


def check_positivity(sample: KernelSample) -> float:
    """Minimum density over |x| ≤ 5 t^{1/a}; strictly positive unless θ = ±a."""
    core = np.abs(sample.x) <= 5.0 * sample.t ** (1.0 / sample.params.a)
    return float(np.min(sample.density[core]))


def half_line_leakage(sample: KernelSample) -> float:
    """Mass of an extremal kernel (a < 1, θ = ±a) on the half-line where it should vanish."""
    p = sample.params
    if not (p.a < 1.0 and math.isclose(abs(p.theta), p.a, rel_tol=0.0, abs_tol=1e-12)):
        raise UnsupportedParameterError(
            "half-line support only holds for extremal kernels with a < 1", a=p.a, theta=p.theta
        )
    # θ = -a: support on [0, ∞)
    wrong_side = sample.x < 0 if p.theta < 0 else sample.x > 0
    return float(np.sum(np.abs(sample.density[wrong_side])) * sample.dx)


def check_smoothness(sample: KernelSample) -> float:
    """Ratio of the largest Fourier coefficient in the upper half band to the mean."""
    spectrum = np.abs(np.fft.rfft(sample.periodized)) * sample.dx
    upper = spectrum[spectrum.size // 2 :]
    return float(np.max(upper) / spectrum[0])


def kernel_property_report(
    p: RieszFellerParams,
    t: float,
    s: float | None = None,
    n: int | None = None,
) -> dict[str, Any]:
    sample = compute_kernel(p, t, n=n)
    s = 0.5 * t if s is None else s
    report: dict[str, Any] = {
        "a": p.a,
        "theta": p.theta,
        "t": sample.t,
        "L": sample.L,
        "n": sample.n,
        "mass": sample.mass,
        "mass_error": abs(sample.mass - 1.0),
        "scaling_deviation": check_scaling(p, t, n=n),
        "semigroup_s": s,
        "semigroup_deviation": check_semigroup(p, s, t - s, n=n),
        "min_density": float(np.min(sample.density)),
        "core_min_density": check_positivity(sample),
        "smoothness_ratio": check_smoothness(sample),
        "half_line_leakage": None,
        "gaussian_deviation": None,
    }
    if p.a < 1.0 and math.isclose(abs(p.theta), p.a, abs_tol=1e-12):
        report["half_line_leakage"] = half_line_leakage(sample)
    if p.a == 2.0:
        report["gaussian_deviation"] = float(np.max(np.abs(sample.density - gaussian_density(sample.x, t))))
    return report


def kernel_property_sweep(
    points: Iterable[tuple[float, float]] = DEFAULT_DIAMOND_POINTS,
    t: float = 0.7,
    n: int | None = None,
    n_jobs: int | None = None,
    show_progress: bool | None = None,
) -> pd.DataFrame:
    """Property report for every (a, θ) point, fanned out over joblib workers."""
    points = list(points)
    show = config.SHOW_PROGRESS if show_progress is None else show_progress
    rows = Parallel(n_jobs=n_jobs or config.THREADS)(
        delayed(kernel_property_report)(RieszFellerParams(a, theta), t, n=n)
        for a, theta in tqdm(points, desc="Kernels", disable=not show)
    )
    return pd.DataFrame(rows)


# ---------- linear evolution ----------


def _cdf(sample: KernelSample) -> tuple[np.ndarray, np.ndarray]:
    left, _ = tail_masses(sample.params, sample.t, sample.L)
    F = left + cumulative_trapezoid(sample.density, sample.x, initial=0.0)
    return sample.x, F


def evolve_linear(p: RieszFellerParams, u0: ProfileGrid, t: float, n: int | None = None) -> ProfileGrid:
    """
    S_t u0 = G(·,t) ∗ u0 for a front-like u0.

    u0 is read as a staircase jumping by Δ_j = u_{j+1} - u_j at the cell
    midpoints (including the jumps to the far-field states), so

        S_t u0(x_i) = left_state + Σ_j Δ_j F(x_i - y_{j+1/2}),

    F the distribution function of G(·,t). The far-field states are unchanged.
    """
    u0.require_finite()
    sample = compute_kernel(p, t, n=n)
    x_k, F_k = _cdf(sample)
    spline = CubicSpline(x_k, F_k)

    h, m = u0.h, u0.n
    z = (np.arange(2 * m) - m + 0.5) * h
    F = np.empty_like(z)
    inside = np.abs(z) < sample.L
    F[inside] = spline(z[inside])
    if p.a == 2.0:
        F[z <= -sample.L] = 0.0
        F[z >= sample.L] = 1.0
    else:
        right, left = _series_coeffs(p, t, sample.L)
        lo = z <= -sample.L
        hi = z >= sample.L
        F[lo] = left[0] * t * np.abs(z[lo]) ** (-p.a) / p.a
        F[hi] = 1.0 - right[0] * t * z[hi] ** (-p.a) / p.a
    np.clip(F, 0.0, 1.0, out=F)

    jumps = np.diff(u0.padded(1, 1))
    values = u0.left_state + fftconvolve(jumps, F)[m : 2 * m]
    return u0.with_values(values)
