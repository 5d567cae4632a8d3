# src/traveling_wave_lab/grids.py

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import pandas as pd

from . import config
from .errors import ConfigError, DegenerateInputError

MIN_GRID_POINTS = 8


def _frozen_array(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProfileGrid:
    """
    Uniform 1-D grid carrying samples of a front-like function.

    Outside the sampled window the function is understood as
    ``left_state`` for ξ < xi0 and ``right_state`` for ξ > xi0 + (n-1)h.
    All tail corrections of the operators rely on this constant extension.
    """

    xi0: float
    h: float
    values: np.ndarray
    left_state: float
    right_state: float

    def __post_init__(self) -> None:
        values = _frozen_array(self.values)
        if values.ndim != 1 or values.size < MIN_GRID_POINTS:
            raise DegenerateInputError(
                f"ProfileGrid needs at least {MIN_GRID_POINTS} samples, got {values.size}",
                n=int(values.size),
            )
        if not (np.isfinite(self.h) and self.h > 0):
            raise DegenerateInputError(f"grid spacing must be positive, got {self.h}", h=self.h)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "xi0", float(self.xi0))
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "left_state", float(self.left_state))
        object.__setattr__(self, "right_state", float(self.right_state))

    # ---------- constructors ----------

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray], np.ndarray],
        xi_min: float,
        xi_max: float,
        n: int,
        left_state: float | None = None,
        right_state: float | None = None,
    ) -> "ProfileGrid":
        """Sample ``fn`` on n uniform points of [xi_min, xi_max]; far fields default to the end samples."""
        xi = np.linspace(xi_min, xi_max, n)
        values = np.asarray(fn(xi), dtype=float)
        return cls(
            xi0=xi_min,
            h=(xi_max - xi_min) / (n - 1),
            values=values,
            left_state=values[0] if left_state is None else left_state,
            right_state=values[-1] if right_state is None else right_state,
        )

    @classmethod
    def tanh_ramp(
        cls,
        left_state: float,
        right_state: float,
        L: float,
        n: int,
        width: float = 1.0,
        center: float = 0.0,
    ) -> "ProfileGrid":
        """Default initial front: tanh ramp of the given width between the two states."""
        mid = 0.5 * (left_state + right_state)
        amp = 0.5 * (left_state - right_state)
        return cls.from_function(
            lambda x: mid - amp * np.tanh((x - center) / width),
            -L,
            L,
            n,
            left_state=left_state,
            right_state=right_state,
        )

    # ---------- views ----------

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def xi(self) -> np.ndarray:
        return self.xi0 + self.h * np.arange(self.n)

    @property
    def xi_max(self) -> float:
        return self.xi0 + self.h * (self.n - 1)

    @property
    def mid_level(self) -> float:
        return 0.5 * (self.left_state + self.right_state)

    def with_values(self, values: np.ndarray) -> "ProfileGrid":
        return ProfileGrid(self.xi0, self.h, values, self.left_state, self.right_state)

    def shifted(self, offset: float) -> "ProfileGrid":
        """Same samples, origin moved by ``offset`` (exact translation)."""
        return ProfileGrid(self.xi0 + offset, self.h, self.values, self.left_state, self.right_state)

    def padded(self, n_left: int, n_right: int) -> np.ndarray:
        """Samples extended by the far-field constants on both sides."""
        return np.concatenate(
            [
                np.full(n_left, self.left_state),
                self.values,
                np.full(n_right, self.right_state),
            ]
        )

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Linear interpolation honoring the constant extension."""
        return np.interp(x, self.xi, self.values, left=self.left_state, right=self.right_state)

    def require_finite(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise DegenerateInputError("profile contains non-finite samples")

    def to_frame(self, value_column: str = "u") -> pd.DataFrame:
        return pd.DataFrame({"xi": self.xi, value_column: self.values})


@dataclass(frozen=True, eq=False)
class KernelSpec:
    """
    Convolution kernel J sampled on the symmetric grid x_k = k·h, k = -K..K.

    Invariants: J ≥ 0, J even, trapezoidal mass within ``mass_tol`` of 1.
    ``exponential_moment`` is the user declaration that ∫ J(y) e^{λy} dy < ∞
    for some λ > 0 (needed for monostable fronts).
    """

    samples: np.ndarray
    h: float
    mass_tol: float = config.QUAD_TOL
    exponential_moment: bool = False
    mass: float = field(init=False)

    def __post_init__(self) -> None:
        samples = _frozen_array(self.samples)
        if samples.ndim != 1 or samples.size < 3 or samples.size % 2 == 0:
            raise ConfigError("kernel samples must be an odd-length symmetric array", n=int(samples.size))
        if not (self.h > 0):
            raise ConfigError(f"kernel spacing must be positive, got {self.h}")
        scale = float(np.max(np.abs(samples))) or 1.0
        if np.min(samples) < -1e-12 * scale:
            raise ConfigError("kernel must be non-negative", min_value=float(np.min(samples)))
        if np.max(np.abs(samples - samples[::-1])) > 1e-9 * scale:
            raise ConfigError("kernel must be even: J(x) = J(-x)")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "mass", float(np.sum(self.weights)))
        if abs(self.mass - 1.0) > self.mass_tol:
            raise ConfigError(
                f"kernel mass {self.mass:.3e} differs from 1 by more than {self.mass_tol:.1e}",
                mass=self.mass,
            )

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray], np.ndarray],
        half_width: float,
        h: float,
        normalize: bool = False,
        **kwargs,
    ) -> "KernelSpec":
        K = int(round(half_width / h))
        x = h * np.arange(-K, K + 1)
        samples = np.asarray(fn(x), dtype=float)
        if normalize:
            w = np.full(samples.size, h)
            w[[0, -1]] *= 0.5
            samples = samples / np.sum(w * samples)
        return cls(samples=samples, h=h, **kwargs)

    @classmethod
    def hat(cls, half_width: float, h: float, **kwargs) -> "KernelSpec":
        """Triangular kernel (b - |y|)/b² supported on [-b, b] (compact, so exponential moments exist)."""
        kwargs.setdefault("exponential_moment", True)
        b = half_width
        return cls.from_function(lambda x: np.clip(b - np.abs(x), 0.0, None) / b**2, b, h, **kwargs)

    @classmethod
    def box(cls, half_width: float, h: float, **kwargs) -> "KernelSpec":
        """Normalized indicator of [-b, b]."""
        kwargs.setdefault("exponential_moment", True)
        b = half_width
        return cls.from_function(lambda x: np.where(np.abs(x) <= b + 1e-12, 1.0 / (2 * b), 0.0), b, h, **kwargs)

    @property
    def half_points(self) -> int:
        return (self.samples.size - 1) // 2

    @property
    def x(self) -> np.ndarray:
        return self.h * np.arange(-self.half_points, self.half_points + 1)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoidal quadrature weights J_k·h (end points halved)."""
        w = self.samples * self.h
        w = w.copy()
        w[[0, -1]] *= 0.5
        return w

    def resample(self, h: float) -> "KernelSpec":
        """Kernel on a grid of spacing h, renormalized to the original mass."""
        if np.isclose(h, self.h, rtol=1e-12, atol=0.0):
            return self
        K = int(np.ceil(self.half_points * self.h / h))
        x = h * np.arange(-K, K + 1)
        samples = np.interp(np.abs(x), self.x[self.half_points :], self.samples[self.half_points :], right=0.0)
        w = np.full(samples.size, h)
        w[[0, -1]] *= 0.5
        samples = samples * (self.mass / np.sum(w * samples))
        return KernelSpec(samples=samples, h=h, mass_tol=self.mass_tol, exponential_moment=self.exponential_moment)


def fd4_derivatives(values: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Fourth-order central first and second differences on the interior points [2:-2]."""
    u = np.asarray(values, dtype=float)
    d1 = (-u[4:] + 8.0 * u[3:-1] - 8.0 * u[1:-3] + u[:-4]) / (12.0 * h)
    d2 = (-u[4:] + 16.0 * u[3:-1] - 30.0 * u[2:-2] + 16.0 * u[1:-3] - u[:-4]) / (12.0 * h**2)
    return d1, d2


def reversed_grid(grid: ProfileGrid) -> ProfileGrid:
    """ξ ↦ -ξ : values read backwards, far-field states exchanged."""
    return ProfileGrid(-grid.xi_max, grid.h, grid.values[::-1], grid.right_state, grid.left_state)


def reflected_grid(grid: ProfileGrid) -> ProfileGrid:
    """u ↦ -u."""
    return ProfileGrid(grid.xi0, grid.h, -grid.values, -grid.left_state, -grid.right_state)
