# src/traveling_wave_lab/nonlinearities.py

"""
Polynomial nonlinearities: fluxes f(u), reaction terms r(u) and shock triples.

Everything is stored as a ``numpy.polynomial.Polynomial`` so derivatives and
antiderivatives are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ConfigError, DegenerateInputError

_SPOT_POINTS = np.array([-1.3, -0.4, 0.0, 0.7, 1.6])
_SPOT_STEP = 1e-5
_SPOT_RTOL = 1e-6


def _spot_check(poly: Polynomial, deriv: Polynomial, name: str) -> None:
    """Central differences of ``poly`` must match ``deriv`` at a few points."""
    fd = (poly(_SPOT_POINTS + _SPOT_STEP) - poly(_SPOT_POINTS - _SPOT_STEP)) / (2 * _SPOT_STEP)
    exact = deriv(_SPOT_POINTS)
    scale = 1.0 + np.max(np.abs(exact))
    if np.max(np.abs(fd - exact)) > _SPOT_RTOL * scale * (1.0 + np.max(np.abs(poly.coef))):
        raise ConfigError(f"{name}: derivative inconsistent with the function")


def _as_polynomial(coeffs: Sequence[float] | Polynomial) -> Polynomial:
    poly = coeffs if isinstance(coeffs, Polynomial) else Polynomial(np.asarray(coeffs, dtype=float))
    if not np.all(np.isfinite(poly.coef)):
        raise ConfigError("polynomial coefficients must be finite")
    return poly.trim()


# -------------------------------------------------------------------
# Flux
# -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FluxSpec:
    """Flux f(u) of a scalar conservation law, with f' and f''."""

    poly: Polynomial
    kind: str = "polynomial"
    d1: Polynomial = field(init=False, repr=False)
    d2: Polynomial = field(init=False, repr=False)

    def __post_init__(self) -> None:
        poly = _as_polynomial(self.poly)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "d1", poly.deriv(1))
        object.__setattr__(self, "d2", poly.deriv(2))
        _spot_check(poly, self.d1, f"flux ({self.kind})")

    @classmethod
    def burgers(cls) -> "FluxSpec":
        return cls(Polynomial([0.0, 0.0, 0.5]), kind="quadratic_burgers")

    @classmethod
    def cubic(cls) -> "FluxSpec":
        return cls(Polynomial([0.0, 0.0, 0.0, 1.0]), kind="cubic")

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "FluxSpec":
        """Coefficients in increasing degree: f(u) = Σ coeffs[k] u^k."""
        return cls(_as_polynomial(coeffs), kind="polynomial")

    @classmethod
    def from_kind(cls, kind: str, coeffs: Sequence[float] | None = None) -> "FluxSpec":
        if kind in {"burgers", "quadratic_burgers"}:
            return cls.burgers()
        if kind == "cubic":
            return cls.cubic()
        if kind == "polynomial" and coeffs:
            return cls.polynomial(coeffs)
        raise ConfigError(f"unknown flux kind {kind!r}", kind=kind)

    def __call__(self, u):
        return self.poly(u)

    def derivative(self, u):
        return self.d1(u)

    def second_derivative(self, u):
        return self.d2(u)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "coefficients": [float(c) for c in self.poly.coef]}


# -------------------------------------------------------------------
# Shock triple
# -------------------------------------------------------------------


@dataclass(frozen=True)
class ShockTriple:
    u_minus: float
    u_plus: float
    c: float

    def __post_init__(self) -> None:
        for name in ("u_minus", "u_plus", "c"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise DegenerateInputError(f"{name} must be finite", **{name: value})
            object.__setattr__(self, name, value)
        if self.u_minus == self.u_plus:
            raise DegenerateInputError("endstates must differ", u_minus=self.u_minus, u_plus=self.u_plus)

    @classmethod
    def from_flux(cls, f: FluxSpec, u_minus: float, u_plus: float) -> "ShockTriple":
        """Triple with the Rankine-Hugoniot speed."""
        if u_minus == u_plus:
            raise DegenerateInputError("endstates must differ", u_minus=u_minus, u_plus=u_plus)
        return cls(u_minus, u_plus, (f(u_plus) - f(u_minus)) / (u_plus - u_minus))

    @property
    def lo(self) -> float:
        return min(self.u_minus, self.u_plus)

    @property
    def hi(self) -> float:
        return max(self.u_minus, self.u_plus)

    def to_dict(self) -> dict:
        return {"u_minus": self.u_minus, "u_plus": self.u_plus, "c": self.c}


# -------------------------------------------------------------------
# Reaction
# -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ReactionSpec:
    """
    Reaction term r(u).

    ``kind == "cubic_from_shock"`` marks r = -h for the cubic flux, where
    h(u) = f(u) - cu - (f(u_-) - cu_-) factors as (u-u_-)(u-u_+)(u+u_-+u_+);
    ``roots`` then holds (u_-, u_+, u_*) with u_* = -u_- - u_+.
    """

    poly: Polynomial
    kind: str = "polynomial"
    roots: tuple[float, ...] | None = None
    d1: Polynomial = field(init=False, repr=False)

    def __post_init__(self) -> None:
        poly = _as_polynomial(self.poly)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "d1", poly.deriv(1))
        _spot_check(poly, self.d1, f"reaction ({self.kind})")

    # ---------- constructors ----------

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "ReactionSpec":
        return cls(_as_polynomial(coeffs))

    @classmethod
    def from_roots(cls, roots: Sequence[float], scale: float = 1.0) -> "ReactionSpec":
        """scale · Π (u - root)."""
        return cls(scale * Polynomial.fromroots(roots), roots=tuple(float(x) for x in roots))

    @classmethod
    def bistable_cubic(cls, a0: float) -> "ReactionSpec":
        """r(u) = u(1-u)(u-a0), stable states 0 and 1."""
        return cls(-Polynomial.fromroots([0.0, 1.0, a0]), kind="bistable_cubic", roots=(1.0, 0.0, a0))

    @classmethod
    def logistic(cls) -> "ReactionSpec":
        """r(u) = u(1-u)."""
        return cls(Polynomial([0.0, 1.0, -1.0]), kind="logistic", roots=(1.0, 0.0))

    @classmethod
    def cubic_from_shock(cls, u_minus: float, u_plus: float) -> "ReactionSpec":
        u_star = -u_minus - u_plus
        poly = -Polynomial.fromroots([u_minus, u_plus, u_star])
        return cls(poly, kind="cubic_from_shock", roots=(u_minus, u_plus, u_star))

    # ---------- evaluation ----------

    def __call__(self, u):
        return self.poly(u)

    def derivative(self, u):
        return self.d1(u)

    @property
    def u_star(self) -> float | None:
        if self.kind == "cubic_from_shock" and self.roots is not None:
            return self.roots[2]
        return None

    def lipschitz(self, lo: float, hi: float) -> float:
        """max |r'| on [lo, hi] (endpoints and interior critical points of r')."""
        candidates = [lo, hi]
        if self.d1.degree() >= 2:
            for z in self.d1.deriv().roots():
                if abs(z.imag) < 1e-12 and lo < z.real < hi:
                    candidates.append(z.real)
        return float(np.max(np.abs(self.d1(np.array(candidates)))))

    def shifted(self, origin: float) -> Polynomial:
        """q(s) = r(origin + s)."""
        return self.poly(Polynomial([origin, 1.0]))

    def reflected(self) -> "ReactionSpec":
        """r̂(w) = -r(-w), the reaction seen by w = -u."""
        roots = None if self.roots is None else tuple(-x for x in self.roots)
        return ReactionSpec(-self.poly(Polynomial([0.0, -1.0])), kind=f"reflected_{self.kind}", roots=roots)

    def negated(self) -> "ReactionSpec":
        return ReactionSpec(-self.poly, kind=f"negated_{self.kind}", roots=self.roots)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "coefficients": [float(c) for c in self.poly.coef]}


def kdvb_h(f: FluxSpec, triple: ShockTriple) -> Polynomial:
    """h(u) = f(u) - cu - (f(u_-) - c u_-)."""
    c = triple.c
    return f.poly - Polynomial([f(triple.u_minus) - c * triple.u_minus, c])
