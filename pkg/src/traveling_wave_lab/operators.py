# src/traveling_wave_lab/operators.py

"""
Linear evolution operators for front_evolution.

Every operator exposes
  - ``symbol(k)``  : continuous Fourier multiplier in numpy's FFT convention,
  - ``apply(u)``   : real-space action on a front-like ProfileGrid (far fields
                     held constant), used by the time stepper and residuals,
  - ``stencil`` / ``discrete_symbol``: the Toeplitz weights of ``apply`` and
                     their periodic multiplier, integrated exactly in time,
  - ``dt_limit(h)``: explicit-splitting guard 0.25·h^order/σ_eff,
  - ``monotone``   : whether the semigroup is positivity preserving.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ConfigError, UnsupportedParameterError
from .grids import KernelSpec, ProfileGrid
from .levy_ops import (
    RieszFellerParams,
    apply_convolution_op,
    apply_riesz_feller,
    caputo_derivative_composition,
    caputo_to_riesz_feller,
    kernel_moments,
    laplacian,
    levy_operator_valid,
    rf_symbol,
)


class EvolutionOperator(ABC):
    name: str = "operator"
    monotone: bool = True

    @abstractmethod
    def symbol(self, k: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def apply(self, u: ProfileGrid) -> ProfileGrid: ...

    @abstractmethod
    def dt_limit(self, h: float) -> float: ...

    def stencil(self, n: int, h: float) -> np.ndarray:
        """
        Weights K_j, j = -(n-1)..n-1, of the real-space action on n points:
        apply(v)_i = Σ_j K_j v_{i+j} whenever v vanishes at both far fields.
        """
        impulse = np.zeros(n)
        impulse[-1] = 1.0
        right = self.apply(ProfileGrid(0.0, h, impulse, 0.0, 0.0)).values
        impulse[-1], impulse[0] = 0.0, 1.0
        left = self.apply(ProfileGrid(0.0, h, impulse, 0.0, 0.0)).values
        return np.concatenate([left[::-1], right[-2::-1]])

    def discrete_symbol(self, n: int, h: float) -> np.ndarray:
        """Multiplier (numpy FFT convention) of the stencil wrapped onto n periodic points."""
        wrapped = np.zeros(n)
        np.add.at(wrapped, np.arange(-(n - 1), n) % n, self.stencil(n, h))
        return np.conj(np.fft.fft(wrapped))

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "monotone": self.monotone}


@dataclass(frozen=True)
class RieszFellerOperator(EvolutionOperator):
    """σ D^a_θ (a = 2 is σ ∂²)."""

    params: RieszFellerParams
    sigma: float = 1.0
    name = "riesz_feller"

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ConfigError(f"diffusion coefficient must be positive, got {self.sigma}", sigma=self.sigma)

    def symbol(self, k: np.ndarray) -> np.ndarray:
        return self.sigma * rf_symbol(self.params, -np.asarray(k, dtype=float))

    def apply(self, u: ProfileGrid) -> ProfileGrid:
        out = apply_riesz_feller(self.params, u)
        return out.with_values(self.sigma * out.values)

    def dt_limit(self, h: float) -> float:
        return 0.25 * h**self.params.a / self.sigma

    def to_dict(self) -> dict[str, Any]:
        return {**super().to_dict(), "a": self.params.a, "theta": self.params.theta, "sigma": self.sigma}


@dataclass(frozen=True)
class ConvolutionOperator(EvolutionOperator):
    """J∗u - u for a probability kernel J."""

    kernel: KernelSpec
    name = "convolution"

    def symbol(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        # Ĵ(k) = Σ J(x_j) w_j e^{-ikx_j}, real for an even J
        return np.cos(np.outer(k, self.kernel.x)) @ self.kernel.weights - self.kernel.mass

    def apply(self, u: ProfileGrid) -> ProfileGrid:
        return apply_convolution_op(self.kernel, u)

    def dt_limit(self, h: float) -> float:
        return 0.5 / self.kernel.mass

    @property
    def moments(self):
        return kernel_moments(self.kernel)

    def to_dict(self) -> dict[str, Any]:
        m = self.moments
        return {
            **super().to_dict(),
            "half_width": self.kernel.half_points * self.kernel.h,
            "first_abs_moment": m.first_abs,
            "second_moment": m.second,
            "heavy_tailed": m.heavy_tailed,
        }


@dataclass(frozen=True)
class CaputoPlusLaplacian(EvolutionOperator):
    """
    γ₁ D^α_+ + γ₂ ∂², a Lévy operator iff γ₁ ≤ 0 and γ₂ ≥ 0.

    With γ₁ = -ε and γ₂ = -δ this is the linear part of the fractal
    KdV-Burgers profile equation read as an evolution equation.
    """

    gamma1: float
    alpha: float
    gamma2: float
    allow_non_levy: bool = False
    name = "caputo_plus_laplacian"

    def __post_init__(self) -> None:
        caputo_to_riesz_feller(self.alpha)
        if not levy_operator_valid(self.gamma1, self.gamma2) and not self.allow_non_levy:
            raise UnsupportedParameterError(
                f"γ₁ D^α + γ₂ ∂² is not a diffusion operator for γ₁ = {self.gamma1}, γ₂ = {self.gamma2}",
                gamma1=self.gamma1,
                gamma2=self.gamma2,
            )

    @property
    def monotone(self) -> bool:  # type: ignore[override]
        return levy_operator_valid(self.gamma1, self.gamma2)

    def symbol(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        # D^α_+ = -D^α_{-α}
        return -self.gamma1 * rf_symbol(caputo_to_riesz_feller(self.alpha), -k) - self.gamma2 * k**2

    def apply(self, u: ProfileGrid) -> ProfileGrid:
        frac = apply_riesz_feller(caputo_to_riesz_feller(self.alpha), u).values
        return ProfileGrid(u.xi0, u.h, -self.gamma1 * frac + self.gamma2 * laplacian(u).values, 0.0, 0.0)

    def dt_limit(self, h: float) -> float:
        if self.gamma2 != 0:
            return 0.25 * h**2 / abs(self.gamma2)
        return 0.25 * h**self.alpha / max(abs(self.gamma1), 1e-300)

    def to_dict(self) -> dict[str, Any]:
        return {**super().to_dict(), "gamma1": self.gamma1, "alpha": self.alpha, "gamma2": self.gamma2}


@dataclass(frozen=True)
class FowlerOperator(EvolutionOperator):
    """
    δ ∂² - ε ∂x D^α_+ = δ ∂² - ε D^{1+α}_{1-α}.

    The fractional part is anti-diffusive at long wavelengths; there is no
    comparison principle.
    """

    eps: float
    delta: float
    alpha: float
    name = "fowler"
    monotone = False

    def __post_init__(self) -> None:
        caputo_derivative_composition(self.alpha)
        if not (self.eps > 0 and self.delta > 0):
            raise ConfigError("Fowler's operator needs eps > 0 and delta > 0", eps=self.eps, delta=self.delta)

    def symbol(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        return -self.delta * k**2 - self.eps * rf_symbol(caputo_derivative_composition(self.alpha), -k)

    def apply(self, u: ProfileGrid) -> ProfileGrid:
        frac = apply_riesz_feller(caputo_derivative_composition(self.alpha), u).values
        return ProfileGrid(u.xi0, u.h, self.delta * laplacian(u).values - self.eps * frac, 0.0, 0.0)

    def dt_limit(self, h: float) -> float:
        return 0.25 * h**2 / self.delta

    def linear_growth(self, k: np.ndarray) -> np.ndarray:
        return self.symbol(k).real

    def to_dict(self) -> dict[str, Any]:
        return {**super().to_dict(), "eps": self.eps, "delta": self.delta, "alpha": self.alpha}


def fowler_linear_growth(eps: float, delta: float, alpha: float, k) -> np.ndarray:
    """
    Re of Fowler's symbol: -δk² + ε|k|^{1+α} cos((1-α)π/2).
    Positive on 0 < |k| < k_c, k_c = (ε cos((1-α)π/2)/δ)^{1/(1-α)}.
    """
    return FowlerOperator(eps, delta, alpha).linear_growth(np.asarray(k, dtype=float))


def fowler_unstable_band(eps: float, delta: float, alpha: float) -> float:
    """Upper edge k_c of the band of linearly growing wavenumbers."""
    FowlerOperator(eps, delta, alpha)
    return (eps * math.cos(0.5 * (1.0 - alpha) * math.pi) / delta) ** (1.0 / (1.0 - alpha))
