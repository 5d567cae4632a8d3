# src/traveling_wave_lab/levy_ops.py

"""
Lévy operators on front-like grid functions.

Riesz-Feller operators D^a_θ (Fourier symbol ψ(k) = -|k|^a exp(i sgn(k) θπ/2)
in the probabilistic convention F[g](k) = ∫ e^{ikx} g(x) dx), Caputo
derivatives D^α_+ and compound-Poisson convolution operators J∗u - (∫J)u.

numpy's FFT uses the opposite sign in the exponent, so a grid function is
multiplied by ψ(-k) when the symbol is applied with ``np.fft``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import gamma, gammaincc

from .errors import ConfigError, DegenerateMeasureError, UnsupportedParameterError
from .grids import KernelSpec, ProfileGrid

logger = logging.getLogger(__name__)

DIAMOND_TOL = 1e-12


# -------------------------------------------------------------------
# 1) Parameters of the Riesz-Feller family
# -------------------------------------------------------------------


@dataclass(frozen=True)
class RieszFellerParams:
    """Order a and asymmetry θ in the Feller-Takayasu diamond |θ| ≤ min(a, 2-a), 0 < a ≤ 2."""

    a: float
    theta: float

    def __post_init__(self) -> None:
        a, theta = float(self.a), float(self.theta)
        if not (0.0 < a <= 2.0):
            raise UnsupportedParameterError(f"order a must lie in (0, 2], got {a}", a=a, theta=theta)
        bound = min(a, 2.0 - a)
        if abs(theta) > bound + DIAMOND_TOL:
            raise UnsupportedParameterError(
                f"(a, θ) = ({a}, {theta}) is outside the Feller-Takayasu diamond |θ| ≤ {bound}",
                a=a,
                theta=theta,
            )
        # snap round-off onto the boundary of the diamond
        theta = math.copysign(min(abs(theta), bound), theta) if theta else 0.0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "theta", theta)

    @property
    def nontrivial(self) -> bool:
        return abs(self.theta) < 1.0

    @property
    def nonlocal_(self) -> bool:
        return self.a < 2.0 and abs(self.theta) < 1.0

    @property
    def nonextremal(self) -> bool:
        return abs(self.theta) < min(self.a, 2.0 - self.a)


@dataclass(frozen=True)
class LevyDensityCoeffs:
    c_plus: float
    c_minus: float


def _half_pi_sine(x: float) -> float:
    """sin(xπ/2) with exact zeros at the corners of the diamond."""
    s = math.sin(0.5 * math.pi * x)
    return 0.0 if s < 1e-14 else s


def rf_symbol(p: RieszFellerParams, k):
    """ψ^a_θ(k) = -|k|^a exp(i sgn(k) θπ/2); scalar in, complex out, arrays broadcast."""
    k_arr = np.asarray(k, dtype=float)
    out = -np.abs(k_arr) ** p.a * np.exp(1j * np.sign(k_arr) * p.theta * np.pi / 2)
    return complex(out) if out.ndim == 0 else out


def levy_density_coeffs(p: RieszFellerParams) -> LevyDensityCoeffs:
    """c_± = Γ(1+a) sin((a±θ)π/2)/π, densities of the Lévy measure on the two half-lines."""
    if p.a == 2.0:
        raise DegenerateMeasureError("a = 2 has no jump part (Laplacian)", a=p.a, theta=p.theta)
    if not p.nonlocal_:
        raise UnsupportedParameterError("trivial parameters (1, ±1) have no Lévy density", a=p.a, theta=p.theta)
    scale = gamma(1.0 + p.a) / math.pi
    return LevyDensityCoeffs(
        c_plus=scale * _half_pi_sine(p.a + p.theta),
        c_minus=scale * _half_pi_sine(p.a - p.theta),
    )


def caputo_to_riesz_feller(alpha: float) -> RieszFellerParams:
    """D^α_+ = -D^α_{-α} for 0 < α < 1."""
    _check_caputo_order(alpha)
    return RieszFellerParams(alpha, -alpha)


def caputo_derivative_composition(alpha: float) -> RieszFellerParams:
    """∂x D^α_+ = D^{1+α}_{1-α} (extremal, order in (1, 2))."""
    _check_caputo_order(alpha)
    return RieszFellerParams(1.0 + alpha, 1.0 - alpha)


def levy_operator_valid(gamma1: float, gamma2: float) -> bool:
    """γ₁ D^α_+ + γ₂ ∂² generates a Lévy semigroup iff γ₁ ≤ 0 and γ₂ ≥ 0."""
    return gamma1 <= 0.0 and gamma2 >= 0.0


def levy_kernel_strictly_positive(gamma1: float, gamma2: float) -> bool:
    return levy_operator_valid(gamma1, gamma2) and gamma2 > 0.0


# -------------------------------------------------------------------
# 2) Singular-integral quadrature for D^a_θ
# -------------------------------------------------------------------


def _interval_moment(j: np.ndarray, p: float) -> np.ndarray:
    """∫_j^{j+1} s^{p-1} ds, evaluated without cancellation."""
    if p == 0.0:
        return np.log1p(1.0 / j)
    return j**p * np.expm1(p * np.log1p(1.0 / j)) / p


def _product_weights(a: float, M: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Weights for ∫_1^M g(s) s^{-1-a} ds with g piecewise linear on the unit nodes,
    the curvature moments e_j = ∫_j^{j+1} (s-j)(j+1-s) s^{-1-a} ds and the
    skew moments f_j = ∫_j^{j+1} (s-j)(j+1-s)(s-j-1/2) s^{-1-a} ds.

    Returns (w, e, f): w[j-1] is the weight of node j = 1..M, e[j-1] and f[j-1]
    belong to the interval [j, j+1], j = 1..M-1.
    """
    j = np.arange(1, M, dtype=float)
    m0 = _interval_moment(j, -a)
    m1 = _interval_moment(j, 1.0 - a)
    m2 = _interval_moment(j, 2.0 - a)
    m3 = _interval_moment(j, 3.0 - a)
    left = (j + 1.0) * m0 - m1
    right = m1 - j * m0

    w = np.zeros(M)
    w[:-1] += left
    w[1:] += right

    mid = j + 0.5
    e = -m2 + (2.0 * j + 1.0) * m1 - j * (j + 1.0) * m0
    f = -m3 + (2.0 * j + 1.0 + mid) * m2 - (j * (j + 1.0) + mid * (2.0 * j + 1.0)) * m1 + mid * j * (j + 1.0) * m0

    # the moment differences cancel badly far out: midpoint expansions instead
    far = j >= 32
    mf = mid[far]
    e[far] = mf ** (-1.0 - a) / 6.0 + (1.0 + a) * (2.0 + a) * mf ** (-3.0 - a) / 240.0
    f[far] = -(1.0 + a) * mf ** (-2.0 - a) / 120.0 - (1.0 + a) * (2.0 + a) * (3.0 + a) * mf ** (-4.0 - a) / 6720.0
    return w, e, f


def _centered_differences(padded: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    d1 = np.zeros_like(padded)
    d2 = np.zeros_like(padded)
    d1[1:-1] = (padded[2:] - padded[:-2]) / (2.0 * h)
    d2[1:-1] = (padded[2:] - 2.0 * padded[1:-1] + padded[:-2]) / h**2
    return d1, d2


def _odd_differences(padded: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fourth-order u' and second-order u''' at the nodes, u''' at the midpoints i + 1/2."""
    d1 = np.zeros_like(padded)
    d3 = np.zeros_like(padded)
    d1[2:-2] = (padded[:-4] - 8.0 * padded[1:-3] + 8.0 * padded[3:-1] - padded[4:]) / (12.0 * h)
    d3[2:-2] = (padded[4:] - 2.0 * padded[3:-1] + 2.0 * padded[1:-3] - padded[:-4]) / (2.0 * h**3)
    mid_d3 = np.zeros(padded.size - 1)
    mid_d3[1:-1] = (padded[3:] - 3.0 * padded[2:-1] + 3.0 * padded[1:-2] - padded[:-3]) / h**3
    return d1, d3, mid_d3


def laplacian(u: ProfileGrid) -> ProfileGrid:
    """Second centered difference with constant extension (the a = 2 member of the family)."""
    padded = u.padded(1, 1)
    _, d2 = _centered_differences(padded, u.h)
    return u.with_values(d2[1:-1])


def apply_riesz_feller(p: RieszFellerParams, u: ProfileGrid) -> ProfileGrid:
    """
    Grid samples of D^a_θ u from the integral representation

        D u = (c_+ - c_-)/(1-a) u' + c_+ ∫_0^∞ [u(x+y) - u(x) - u'(x) y 1_{y<1}] y^{-1-a} dy
                                    + c_- ∫_0^∞ [u(x-y) - u(x) + u'(x) y 1_{y<1}] y^{-1-a} dy.

    Each half-line splits into
      - near field (0, h): third-order Taylor closure
        u'' h^{2-a} / (2(2-a)) ± u''' h^{3-a} / (6(3-a)),
      - grid field [h, Y]: product integration of the piecewise-linear interpolant,
        corrected by its curvature and skew errors (exact for local cubics),
      - far field (Y, ∞): constant extension, (state - u(x)) Y^{-a} / a.
    The compensator on [h, 1) is integrated analytically and merged with the drift.
    The odd third-order parts cancel between the half-lines only when θ = 0.
    """
    u.require_finite()
    if p.a == 2.0:
        return laplacian(u)
    if p.a == 1.0 and p.theta != 0.0:
        raise UnsupportedParameterError(
            "a = 1 with θ ≠ 0 has no singular-integral representation", a=p.a, theta=p.theta
        )
    coeffs = levy_density_coeffs(p)
    a, h, n = p.a, u.h, u.n
    if h >= 1.0:
        raise ConfigError(f"grid spacing h = {h} must be below 1 for the near-field closure", h=h)

    M = max(n - 1, 2)
    padded = u.padded(M, M)
    _, d2 = _centered_differences(padded, h)
    d1, d3, mid_d3 = _odd_differences(padded, h)
    mid_d2 = 0.5 * (d2[:-1] + d2[1:])
    center = slice(M, M + n)
    values = u.values

    w, e, f = _product_weights(a, M)
    w_sum = float(np.sum(w))
    forward = fftconvolve(padded, w[::-1], mode="valid")[M + 1 : M + 1 + n]
    backward = fftconvolve(padded, w, mode="valid")[:n]
    curv_forward = fftconvolve(mid_d2, e[::-1], mode="valid")[M + 1 : M + 1 + n]
    curv_backward = fftconvolve(mid_d2, e, mode="valid")[:n]
    skew_forward = fftconvolve(mid_d3, f[::-1], mode="valid")[M + 1 : M + 1 + n]
    skew_backward = fftconvolve(mid_d3, f, mode="valid")[:n]

    near = d2[center] * h ** (2.0 - a) / (2.0 * (2.0 - a))
    near_odd = d3[center] * h ** (3.0 - a) / (6.0 * (3.0 - a))
    far = (M * h) ** (-a) / a

    plus = (
        near
        + near_odd
        + h ** (-a) * (forward - w_sum * values)
        - 0.5 * h ** (2.0 - a) * curv_forward
        - h ** (3.0 - a) * skew_forward / 6.0
        + (u.right_state - values) * far
    )
    minus = (
        near
        - near_odd
        + h ** (-a) * (backward - w_sum * values)
        - 0.5 * h ** (2.0 - a) * curv_backward
        + h ** (3.0 - a) * skew_backward / 6.0
        + (u.left_state - values) * far
    )
    out = coeffs.c_plus * plus + coeffs.c_minus * minus
    if coeffs.c_plus != coeffs.c_minus:
        out = out + (coeffs.c_plus - coeffs.c_minus) * d1[center] * h ** (1.0 - a) / (1.0 - a)
    return ProfileGrid(u.xi0, h, out, 0.0, 0.0)


def apply_rf_spectral(p: RieszFellerParams, u: ProfileGrid, pad: int = 1) -> ProfileGrid:
    """
    Fourier-multiplier evaluation of D^a_θ on the periodic extension of u - state.

    Only meaningful for functions with equal far fields that decay inside the
    window; it serves as the independent oracle for ``apply_riesz_feller``.
    ``pad > 1`` zero-extends u - state to pad·n points first, which pushes the
    periodic images of the algebraic tails of D^a_θ u further away.
    """
    u.require_finite()
    if not np.isclose(u.left_state, u.right_state):
        raise ConfigError("spectral evaluation needs equal far-field states")
    if pad < 1:
        raise ConfigError(f"padding factor must be at least 1, got {pad}", pad=pad)
    size = pad * u.n
    k = 2.0 * np.pi * np.fft.fftfreq(size, d=u.h)
    base = u.values - u.left_state
    out = np.fft.ifft(rf_symbol(p, -k) * np.fft.fft(base, n=size)).real[: u.n]
    return ProfileGrid(u.xi0, u.h, out, 0.0, 0.0)


def rf_crosscheck(p: RieszFellerParams, u: ProfileGrid, pad: int = 64) -> float:
    """sup |quadrature - padded spectral| for a function decaying to its far-field state."""
    quad = apply_riesz_feller(p, u).values
    spec = apply_rf_spectral(p, u, pad=pad).values
    deviation = float(np.max(np.abs(quad - spec)))
    logger.debug("D^%s_%s cross-check: %.3e", p.a, p.theta, deviation)
    return deviation


def rf_sup_bound(p: RieszFellerParams, M: float, norm_u1: float, norm_u2: float) -> float:
    """
    sup |D^a_θ f| ≤ K ‖f''‖ M^{2-a}/(2-a) + 4 K ‖f'‖ M^{1-a}/(a-1),
    K = Γ(1+a)/π |sin((a+θ)π/2) + sin((a-θ)π/2)|, valid for 1 < a < 2.
    """
    if not (1.0 < p.a < 2.0):
        raise UnsupportedParameterError(f"sup bound requires 1 < a < 2, got a = {p.a}", a=p.a)
    if M <= 0:
        raise ConfigError(f"splitting radius M must be positive, got {M}")
    a = p.a
    K = gamma(1.0 + a) / math.pi * abs(
        math.sin((a + p.theta) * math.pi / 2) + math.sin((a - p.theta) * math.pi / 2)
    )
    return K * norm_u2 * M ** (2.0 - a) / (2.0 - a) + 4.0 * K * norm_u1 * M ** (1.0 - a) / (a - 1.0)


# -------------------------------------------------------------------
# 3) Caputo derivative D^α_+ (Grünwald-Letnikov)
# -------------------------------------------------------------------


def _check_caputo_order(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise UnsupportedParameterError(f"Caputo order must lie in (0, 1), got {alpha}", alpha=alpha)


def gl_weights(alpha: float, n: int) -> np.ndarray:
    """w_0 = 1, w_j = w_{j-1} (1 - (1+α)/j)."""
    factors = np.ones(n)
    factors[1:] = 1.0 - (1.0 + alpha) / np.arange(1, n)
    return np.cumprod(factors)


def exponential_left_tail(alpha: float, lam: float, x0: float) -> Callable[[np.ndarray], np.ndarray]:
    """
    Contribution to D^α_+ u(x) of an exponential left tail u(y) = e^{λy}, y < x0:
    λ^α e^{λx} Q(1-α, λ(x - x0)), Q the regularized upper incomplete gamma function.
    """
    _check_caputo_order(alpha)

    def tail(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return lam**alpha * np.exp(lam * x) * gammaincc(1.0 - alpha, lam * np.maximum(x - x0, 0.0))

    return tail


def apply_caputo(
    alpha: float,
    u: ProfileGrid,
    left_tail: Callable[[np.ndarray], np.ndarray] | None = None,
) -> ProfileGrid:
    """
    D^α_+ u(x) = 1/Γ(1-α) ∫_{-∞}^x u'(y) (x-y)^{-α} dy via Grünwald-Letnikov weights.

    Without ``left_tail`` the function is ≡ left_state before the grid and the
    tail contributes nothing. With ``left_tail`` the grid part is taken relative
    to the first sample and the callable supplies the analytic contribution of
    everything left of xi0. First-order accurate in h.
    """
    _check_caputo_order(alpha)
    u.require_finite()
    reference = u.left_state if left_tail is None else u.values[0]
    weights = gl_weights(alpha, u.n)
    out = u.h ** (-alpha) * fftconvolve(u.values - reference, weights)[: u.n]
    if left_tail is not None:
        out = out + left_tail(u.xi)
    return ProfileGrid(u.xi0, u.h, out, 0.0, 0.0)


# -------------------------------------------------------------------
# 4) Compound-Poisson convolution operators
# -------------------------------------------------------------------


@dataclass(frozen=True)
class KernelMoments:
    first_abs: float
    second: float
    heavy_tailed: bool


def kernel_moments(J: KernelSpec, tail_fraction: float = 1e-3) -> KernelMoments:
    """
    Discrete ∫|y|J and ∫y²J. A kernel without a declared exponential moment is
    flagged heavy-tailed when the outer 10% of its support carries more than
    ``tail_fraction`` of the first moment.
    """
    x, w = J.x, J.weights
    first = float(np.sum(np.abs(x) * w))
    second = float(np.sum(x**2 * w))
    outer = np.abs(x) > 0.9 * np.max(np.abs(x))
    share = float(np.sum(np.abs(x[outer]) * w[outer])) / first if first > 0 else 0.0
    return KernelMoments(first_abs=first, second=second, heavy_tailed=not J.exponential_moment and share > tail_fraction)


def apply_convolution_op(J: KernelSpec, u: ProfileGrid) -> ProfileGrid:
    """J∗u - (∫J) u with the convolution closed by the constant far fields."""
    u.require_finite()
    kernel = J.resample(u.h)
    K = kernel.half_points
    padded = u.padded(K, K)
    conv = np.convolve(padded, kernel.weights, mode="valid")
    return ProfileGrid(u.xi0, u.h, conv - kernel.mass * u.values, 0.0, 0.0)
