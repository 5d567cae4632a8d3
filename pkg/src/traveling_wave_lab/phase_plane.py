# src/traveling_wave_lab/phase_plane.py

"""
Local traveling-wave ODE  σū'' + cū' + r(ū) = 0  in the phase plane (u, v = u').

- stationary states : eigenvalues and their type
- bistable r        : unique speed, two-sided shooting matched at the mid level
- monostable r      : one front per speed, tail winding tracked in log-polar
                      coordinates around u_+
- KdV-Burgers       : h(ū) = εū' + δū'' mapped onto the reaction-diffusion problem
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Sequence

import numpy as np
import pandas as pd
from numpy.polynomial import Polynomial
from numpy.polynomial.polynomial import polyval
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import config
from .errors import (
    BracketNotFoundError,
    ConfigError,
    NoConnectionError,
    NonConvergenceError,
    NoTravelingWaveError,
)
from .grids import ProfileGrid, fd4_derivatives, reflected_grid, reversed_grid
from .nonlinearities import FluxSpec, ReactionSpec, ShockTriple, kdvb_h
from .shock_classify import (
    ReactionClass,
    classify_reaction,
    interior_sign_pattern,
    potential_gap,
    require_rankine_hugoniot,
)

logger = logging.getLogger(__name__)

START_OFFSET = 1e-6
TAIL_FLOOR = 1e-14
PROFILE_STEP = 0.01
MAX_PROFILE_POINTS = 400_000
POLAR_SWITCH = 1e-3
POLAR_DEPTH = -700.0
ODE_RTOL = 1e-12
MONOTONE_TOL = 1e-6


class TailGeometry(str, Enum):
    MONOTONE = "Monotone"
    OSCILLATORY = "Oscillatory"


class StationaryType(str, Enum):
    SADDLE = "Saddle"
    STABLE_NODE = "StableNode"
    UNSTABLE_NODE = "UnstableNode"
    STABLE_SPIRAL = "StableSpiral"
    UNSTABLE_SPIRAL = "UnstableSpiral"
    NON_HYPERBOLIC = "NonHyperbolic"


@dataclass(frozen=True)
class StationaryStateReport:
    state: float
    eigenvalues: tuple[complex, complex]
    type: StationaryType

    @property
    def trace(self) -> complex:
        return self.eigenvalues[0] + self.eigenvalues[1]

    @property
    def determinant(self) -> complex:
        return self.eigenvalues[0] * self.eigenvalues[1]

    def to_dict(self) -> dict[str, Any]:
        return {
            "state": self.state,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "type": self.type.value,
        }


@dataclass(frozen=True, eq=False)
class TWSResult:
    """Profile ū (normalized so ū(0) is the mid level) and wave speed with diagnostics."""

    profile: ProfileGrid
    speed: float
    residual_sup: float
    monotone: bool
    tail: TailGeometry
    iterations: int = 0
    conjectural: bool = False
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def summary(self) -> dict[str, Any]:
        return {
            "speed": self.speed,
            "residual_sup": self.residual_sup,
            "monotone": self.monotone,
            "tail": self.tail.value,
            "iterations": self.iterations,
            "conjectural": self.conjectural,
            "u_minus": self.profile.left_state,
            "u_plus": self.profile.right_state,
            "n": self.profile.n,
            "h": self.profile.h,
            "xi_min": self.profile.xi0,
            "xi_max": self.profile.xi_max,
            "diagnostics": self.diagnostics,
        }

    def profile_frame(self) -> pd.DataFrame:
        df = self.profile.to_frame()
        df["v"] = np.gradient(self.profile.values, self.profile.h)
        return df


# -------------------------------------------------------------------
# 1) Vector field and stationary states
# -------------------------------------------------------------------


def twe_vector_field(r: ReactionSpec, sigma: float, c: float, state: Sequence[float]) -> tuple[float, float]:
    """F(u, v) = (v, (-r(u) - cv)/σ)."""
    u, v = state
    return float(v), float((-r(u) - c * v) / sigma)


def _classify_eigenvalues(l1: complex, l2: complex, scale: float) -> StationaryType:
    tol = 1e-12 * scale
    if abs(l1.real) <= tol or abs(l2.real) <= tol:
        return StationaryType.NON_HYPERBOLIC
    if abs(l1.imag) > tol:
        return StationaryType.STABLE_SPIRAL if l1.real < 0 else StationaryType.UNSTABLE_SPIRAL
    if l1.real * l2.real < 0:
        return StationaryType.SADDLE
    return StationaryType.STABLE_NODE if l1.real < 0 else StationaryType.UNSTABLE_NODE


def eigen_report(rprime_at_state: float, sigma: float, c: float, state: float = math.nan) -> StationaryStateReport:
    """λ_± = -c/(2σ) ± √(c²/(4σ²) - r'(u_s)/σ)."""
    if sigma <= 0:
        raise ConfigError(f"diffusion coefficient must be positive, got {sigma}", sigma=sigma)
    root = np.sqrt(complex(c * c / (4.0 * sigma**2) - rprime_at_state / sigma))
    lp = complex(-c / (2.0 * sigma) + root)
    lm = complex(-c / (2.0 * sigma) - root)
    scale = 1.0 + abs(c) / sigma + math.sqrt(abs(rprime_at_state) / sigma)
    return StationaryStateReport(state, (lp, lm), _classify_eigenvalues(lp, lm, scale))


def kdvb_eigen_report(hprime_at_state: float, delta: float, eps: float, state: float = math.nan) -> StationaryStateReport:
    """Roots of δλ² + ελ - h'(u_s) = 0, the linearization of h(ū) = εū' + δū''."""
    if delta == 0:
        raise ConfigError("the KdV-Burgers phase plane needs delta != 0")
    root = np.sqrt(complex(eps * eps + 4.0 * delta * hprime_at_state))
    lp = complex((-eps + root) / (2.0 * delta))
    lm = complex((-eps - root) / (2.0 * delta))
    scale = 1.0 + abs(eps / delta) + math.sqrt(abs(hprime_at_state / delta))
    return StationaryStateReport(state, (lp, lm), _classify_eigenvalues(lp, lm, scale))


def tail_geometry(sigma: float, c: float, rprime_at_uplus: float) -> TailGeometry:
    """Monotone approach of u_+ iff c² - 4σ r'(u_+) ≥ 0."""
    return TailGeometry.MONOTONE if c * c - 4.0 * sigma * rprime_at_uplus >= 0 else TailGeometry.OSCILLATORY


def kdvb_reaction(f: FluxSpec, triple: ShockTriple) -> ReactionSpec:
    """r = -h for the shock triple; exact factorization for the cubic flux."""
    require_rankine_hugoniot(f, triple)
    if f.kind == "cubic":
        return ReactionSpec.cubic_from_shock(triple.u_minus, triple.u_plus)
    return ReactionSpec(-kdvb_h(f, triple), kind="kdvb")


# -------------------------------------------------------------------
# 2) Helpers
# -------------------------------------------------------------------


def _rd_rhs(r: ReactionSpec, sigma: float, c: float) -> Callable:
    coef = r.poly.coef

    def rhs(xi, y):
        return [y[1], (-polyval(y[0], coef) - c * y[1]) / sigma]

    return rhs


def rd_residual(profile: ProfileGrid, r: ReactionSpec, sigma: float, c: float) -> float:
    """sup |cū' + r(ū) + σū''| on the interior, fourth-order differences."""
    d1, d2 = fd4_derivatives(profile.values, profile.h)
    u = profile.values[2:-2]
    return float(np.max(np.abs(c * d1 + r(u) + sigma * d2)))


def is_monotone(profile: ProfileGrid, tol: float = MONOTONE_TOL) -> bool:
    """Discrete differences one-signed (towards the right state) within tol·|u_+ - u_-|."""
    steps = np.diff(profile.values) * np.sign(profile.right_state - profile.left_state)
    return bool(np.all(steps >= -tol * abs(profile.right_state - profile.left_state)))


def _sample(
    pieces: list[tuple[float, float, Callable[[np.ndarray], np.ndarray]]],
    xi_min: float,
    xi_max: float,
    hp: float,
    left_state: float,
    right_state: float,
) -> ProfileGrid:
    """Uniform grid through ξ = 0 covering [xi_min, xi_max]; each piece fills its own ξ range."""
    if (xi_max - xi_min) / hp > MAX_PROFILE_POINTS:
        hp = (xi_max - xi_min) / MAX_PROFILE_POINTS
        logger.info("profile step raised to %.3g to stay below %d points", hp, MAX_PROFILE_POINTS)
    k = np.arange(math.floor(xi_min / hp), math.ceil(xi_max / hp) + 1)
    xi = hp * k
    values = np.empty_like(xi)
    for lo, hi, fn in pieces:
        mask = (xi >= lo) & (xi <= hi)
        if np.any(mask):
            values[mask] = fn(xi[mask])
    # the outer pieces also cover the points beyond their bounds
    first_lo, _, first_fn = pieces[0]
    _, last_hi, last_fn = pieces[-1]
    before, after = xi < first_lo, xi > last_hi
    if np.any(before):
        values[before] = first_fn(xi[before])
    if np.any(after):
        values[after] = last_fn(xi[after])
    return ProfileGrid(xi[0], hp, values, left_state, right_state)


def _reflect_result(res: TWSResult) -> TWSResult:
    return dataclasses.replace(
        res, profile=reflected_grid(res.profile), diagnostics={**res.diagnostics, "reflected": True}
    )


def _reverse_result(res: TWSResult) -> TWSResult:
    return dataclasses.replace(
        res,
        profile=reversed_grid(res.profile),
        speed=-res.speed,
        diagnostics={**res.diagnostics, "reversed": True},
    )


def _saddle_rates(r: ReactionSpec, sigma: float, c: float, u_minus: float, u_plus: float) -> tuple[float, float]:
    """Unstable eigenvalue at u_- and stable eigenvalue at u_+ (both saddles in the bistable case)."""
    at_minus = eigen_report(r.derivative(u_minus), sigma, c, u_minus)
    at_plus = eigen_report(r.derivative(u_plus), sigma, c, u_plus)
    return at_minus.eigenvalues[0].real, at_plus.eigenvalues[1].real


# -------------------------------------------------------------------
# 3) Bistable: two-sided shooting
# -------------------------------------------------------------------


@dataclass
class _Branch:
    sol: Any
    reached: bool
    xi_hit: float
    v_hit: float


def _shoot_to_level(rhs, start, level, backward: bool, horizon: float, atol: float) -> _Branch:
    def hit(xi, y):
        return y[0] - level

    def turn(xi, y):
        return y[1]

    hit.terminal = True
    turn.terminal = True
    span = (0.0, -horizon if backward else horizon)
    sol = solve_ivp(
        rhs, span, start, method="DOP853", rtol=ODE_RTOL, atol=atol, events=(hit, turn), dense_output=True
    )
    if sol.t_events[0].size:
        return _Branch(sol, True, float(sol.t_events[0][0]), float(sol.y_events[0][0][1]))
    return _Branch(sol, False, float(sol.t[-1]), 0.0)


def shoot_bistable(
    r: ReactionSpec,
    sigma: float,
    u_minus: float,
    u_plus: float,
    tol: float = 1e-10,
    hp: float = PROFILE_STEP,
    start_offset: float = START_OFFSET,
) -> TWSResult:
    """
    Unique front of a bistable reaction.

    The unstable manifold of (u_-, 0) is integrated forward and the stable
    manifold of (u_+, 0) backward, both from an offset start_offset·|u_- - u_+|
    along the linear eigenvectors, until they reach the mid level. The speed is
    the root of c ↦ v_left(c) - v_right(c), bracketed in |c| ≤ c_max and found
    with Brent's method; a branch that turns back before the mid level counts
    as v = 0.
    """
    if sigma <= 0:
        raise ConfigError(f"diffusion coefficient must be positive, got {sigma}", sigma=sigma)
    if u_minus < u_plus:
        return _reflect_result(shoot_bistable(r.reflected(), sigma, -u_minus, -u_plus, tol, hp, start_offset))
    label = classify_reaction(r, u_minus, u_plus)
    if label is not ReactionClass.BISTABLE:
        raise ConfigError(f"bistable shooting needs a bistable reaction, got {label.value}", reaction_class=label.value)

    delta_u = u_minus - u_plus
    eps0 = start_offset * delta_u
    mid = 0.5 * (u_minus + u_plus)
    lip = r.lipschitz(u_plus, u_minus)
    atol = min(config.ODE_ATOL, 1e-3 * eps0)
    horizon = 1e3 * (1.0 + math.sqrt(sigma / lip))

    def branches(c: float) -> tuple[_Branch, _Branch, float, float]:
        lam, mu = _saddle_rates(r, sigma, c, u_minus, u_plus)
        rhs = _rd_rhs(r, sigma, c)
        left = _shoot_to_level(rhs, [u_minus - eps0, -eps0 * lam], mid, False, horizon, atol)
        right = _shoot_to_level(rhs, [u_plus + eps0, eps0 * mu], mid, True, horizon, atol)
        return left, right, lam, mu

    def mismatch(c: float) -> float:
        left, right, _, _ = branches(c)
        return left.v_hit - right.v_hit

    c_max = 1.0 + 2.0 * max(lip, math.sqrt(sigma * lip))
    for _ in range(5):
        g_lo, g_hi = mismatch(-c_max), mismatch(c_max)
        if g_lo < 0.0 < g_hi:
            break
        c_max *= 2.0
    else:
        raise BracketNotFoundError(
            "no speed bracket for the bistable front",
            c_max=c_max,
            mismatch_lo=g_lo,
            mismatch_hi=g_hi,
        )

    c, info = brentq(mismatch, -c_max, c_max, xtol=tol, rtol=4 * np.finfo(float).eps, full_output=True)
    left, right, lam, mu = branches(c)
    if not (left.reached and right.reached):
        raise NoConnectionError("manifolds do not reach the mid level at the converged speed", c=c)
    logger.info("bistable speed c = %.12g after %d iterations", c, info.iterations)

    t_left, t_right = left.xi_hit, -right.xi_hit
    extent = math.log(eps0 / (TAIL_FLOOR * delta_u))
    pieces = [
        (-math.inf, -t_left, lambda x: u_minus - eps0 * np.exp(lam * (x + t_left))),
        (-t_left, 0.0, lambda x: left.sol.sol(x + t_left)[0]),
        (0.0, t_right, lambda x: right.sol.sol(x - t_right)[0]),
        (t_right, math.inf, lambda x: u_plus + eps0 * np.exp(mu * (x - t_right))),
    ]
    profile = _sample(pieces, -t_left - extent / lam, t_right + extent / abs(mu), hp, u_minus, u_plus)

    gap = potential_gap(r, u_minus, u_plus)
    if abs(c) > 10 * tol and abs(gap) > 1e-12 and np.sign(c) != -np.sign(gap):
        logger.warning("speed %.6g contradicts the potential balance ∫r = %.3e", c, gap)

    return TWSResult(
        profile=profile,
        speed=float(c),
        residual_sup=rd_residual(profile, r, sigma, c),
        monotone=is_monotone(profile),
        tail=tail_geometry(sigma, c, r.derivative(u_plus)),
        iterations=int(info.iterations),
        diagnostics={
            "reaction_class": label.value,
            "potential_gap": gap,
            "speed_bracket": c_max,
            "unstable_rate_minus": lam,
            "stable_rate_plus": mu,
            "start_offset": start_offset,
        },
    )


# -------------------------------------------------------------------
# 4) Monostable: forward shooting with log-polar tail
# -------------------------------------------------------------------


@dataclass
class _MonostableRun:
    cartesian: Any
    polar: Any
    lam: float
    eps0: float
    t_switch: float
    t_cut: float
    xi_mid: float
    monotone: bool


def _monostable_run(
    r: ReactionSpec,
    sigma: float,
    c: float,
    u_minus: float,
    u_plus: float,
    start_offset: float = START_OFFSET,
) -> _MonostableRun:
    delta_u = u_minus - u_plus
    eps0 = start_offset * delta_u
    mid = 0.5 * (u_minus + u_plus)
    lam = eigen_report(r.derivative(u_minus), sigma, c, u_minus).eigenvalues[0].real
    near = eigen_report(r.derivative(u_plus), sigma, c, u_plus)
    rate = min(abs(z.real) for z in near.eigenvalues)
    if rate <= 0:
        raise NoConnectionError("u_+ is not attracting in the phase plane", c=c)

    def close(xi, y):
        return math.hypot(y[0] - u_plus, y[1]) - POLAR_SWITCH * delta_u

    def below(xi, y):
        return y[0] - (u_plus - 2.0 * delta_u)

    def above(xi, y):
        return (u_minus + 2.0 * delta_u) - y[0]

    def crossing(xi, y):
        return y[0] - mid

    close.terminal = below.terminal = above.terminal = True
    horizon = 50.0 * (1.0 + 1.0 / lam + 1.0 / rate)
    cart = solve_ivp(
        _rd_rhs(r, sigma, c),
        (0.0, horizon),
        [u_minus - eps0, -eps0 * lam],
        method="DOP853",
        rtol=ODE_RTOL,
        atol=min(config.ODE_ATOL, 1e-3 * eps0),
        events=(close, below, above, crossing),
        dense_output=True,
    )
    if not cart.t_events[0].size:
        raise NoConnectionError(
            "trajectory from the saddle at u_- does not reach u_+",
            c=c,
            escaped=bool(cart.t_events[1].size or cart.t_events[2].size),
        )
    t_switch = float(cart.t_events[0][0])
    xi_mid = float(cart.t_events[3][0])
    samples = cart.sol(np.linspace(0.0, t_switch, 4001))
    monotone = bool(np.all(samples[1] <= 0.0) and np.all(samples[0] >= u_plus))

    # log-polar coordinates around (u_+, 0): s = e^ρ cos φ, v = e^ρ sin φ
    q = r.shifted(u_plus).coef
    p = q[1:] if q.size > 1 else np.zeros(1)
    s0, v0 = cart.y_events[0][0][0] - u_plus, cart.y_events[0][0][1]
    rho0, phi0 = math.log(math.hypot(s0, v0)), math.atan2(v0, s0)

    def polar(xi, y):
        rho, phi = y
        cp, sp = math.cos(phi), math.sin(phi)
        g = (-cp * polyval(math.exp(rho) * cp, p) - c * sp) / sigma
        return [cp * sp + sp * g, cp * g - sp * sp]

    def leave_low(xi, y):
        return y[1] + 0.5 * math.pi

    def leave_high(xi, y):
        return y[1]

    rho_cut = math.log(TAIL_FLOOR * delta_u)

    def cut(xi, y):
        return y[0] - rho_cut

    def bottom(xi, y):
        return y[0] - POLAR_DEPTH

    bottom.terminal = True
    pol = solve_ivp(
        polar,
        (t_switch, t_switch + 2.0 * (rho0 - POLAR_DEPTH) / rate + 100.0),
        [rho0, phi0],
        method="DOP853",
        rtol=1e-10,
        atol=1e-12,
        events=(leave_low, leave_high, cut, bottom),
        dense_output=True,
    )
    monotone = (
        monotone
        and -0.5 * math.pi < phi0 < 0.0
        and not pol.t_events[0].size
        and not pol.t_events[1].size
    )
    t_cut = float(pol.t_events[2][0]) if pol.t_events[2].size else float(pol.t[-1])
    return _MonostableRun(cart, pol, lam, eps0, t_switch, t_cut, xi_mid, monotone)


def shoot_monostable(
    r: ReactionSpec,
    sigma: float,
    c: float,
    u_minus: float,
    u_plus: float,
    tol: float = 1e-8,
    hp: float = PROFILE_STEP,
    start_offset: float = START_OFFSET,
) -> TWSResult:
    """
    Front of speed c for a monostable reaction.

    The unstable manifold of the saddle (u_-, 0) is followed in Cartesian
    coordinates until it is within 1e-3·|u_- - u_+| of (u_+, 0), then in
    log-polar coordinates so that slow windings around u_+ stay visible far
    below round-off. ``monotone`` is the observed behavior; ``tail`` is the
    discriminant prediction.
    """
    if sigma <= 0:
        raise ConfigError(f"diffusion coefficient must be positive, got {sigma}", sigma=sigma)
    if u_minus < u_plus:
        return _reflect_result(shoot_monostable(r.reflected(), sigma, c, -u_minus, -u_plus, tol, hp, start_offset))
    label = classify_reaction(r, u_minus, u_plus)
    if label is not ReactionClass.MONOSTABLE:
        raise ConfigError(f"monostable shooting needs a monostable reaction, got {label.value}", reaction_class=label.value)
    if c <= 0:
        raise NoTravelingWaveError(
            f"monostable fronts need a positive speed, got c = {c}",
            condition="potential balance: sgn(c) = -sgn(∫r) with r > 0 between the endstates",
            c=c,
        )

    run = _monostable_run(r, sigma, c, u_minus, u_plus, start_offset)
    delta_u = u_minus - u_plus
    extent = math.log(run.eps0 / (TAIL_FLOOR * delta_u)) / run.lam
    shift = run.xi_mid

    def from_polar(x):
        rho, phi = run.polar.sol(np.minimum(x + shift, run.polar.t[-1]))
        return u_plus + np.exp(rho) * np.cos(phi)

    pieces = [
        (-math.inf, -shift, lambda x: u_minus - run.eps0 * np.exp(run.lam * (x + shift))),
        (-shift, run.t_switch - shift, lambda x: run.cartesian.sol(x + shift)[0]),
        (run.t_switch - shift, run.t_cut - shift, from_polar),
    ]
    profile = _sample(pieces, -shift - extent, run.t_cut - shift, hp, u_minus, u_plus)
    tail = tail_geometry(sigma, c, r.derivative(u_plus))
    monotone = run.monotone and is_monotone(profile)
    if tail is TailGeometry.MONOTONE and not monotone:
        logger.warning("c = %.6g is above the linear spreading speed but the front is not monotone", c)

    residual = rd_residual(profile, r, sigma, c)
    if residual > 10 * max(tol, 1e-6):
        logger.warning("monostable front residual %.3e above %.1e", residual, 10 * max(tol, 1e-6))
    return TWSResult(
        profile=profile,
        speed=float(c),
        residual_sup=residual,
        monotone=monotone,
        tail=tail,
        diagnostics={
            "reaction_class": label.value,
            "winding_monotone": run.monotone,
            "xi_polar_switch": run.t_switch - shift,
            "potential_gap": potential_gap(r, u_minus, u_plus),
        },
    )


def locate_tail_transition(
    r: ReactionSpec,
    sigma: float,
    u_minus: float,
    u_plus: float,
    c_lo: float | None = None,
    c_hi: float | None = None,
    tol: float = 1e-3,
) -> tuple[float, int]:
    """Smallest speed whose monostable front is monotone, by bisection on the observed winding."""
    if u_minus < u_plus:
        return locate_tail_transition(r.reflected(), sigma, -u_minus, -u_plus, c_lo, c_hi, tol)

    def monotone(c: float) -> bool:
        try:
            return _monostable_run(r, sigma, c, u_minus, u_plus).monotone
        except NoConnectionError:
            return False

    lip = r.lipschitz(u_plus, u_minus)
    if c_hi is None:
        c_hi = 1.0 + 2.0 * max(lip, math.sqrt(sigma * lip))
        for _ in range(6):
            if monotone(c_hi):
                break
            c_hi *= 2.0
    if not monotone(c_hi):
        raise BracketNotFoundError("no monotone front below the upper speed bracket", c_hi=c_hi)
    c_lo = 1e-2 * c_hi if c_lo is None else c_lo
    if monotone(c_lo):
        raise BracketNotFoundError("front already monotone at the lower speed bracket", c_lo=c_lo)

    iterations = 0
    while c_hi - c_lo > tol:
        middle = 0.5 * (c_lo + c_hi)
        if monotone(middle):
            c_hi = middle
        else:
            c_lo = middle
        iterations += 1
    return c_hi, iterations


@dataclass(frozen=True)
class MinSpeedEstimate:
    closed_form: float | None
    shooting: float
    concave: bool
    iterations: int

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def min_speed_estimate(
    r: ReactionSpec,
    sigma: float,
    u_minus: float,
    u_plus: float,
    tol: float = 1e-3,
) -> MinSpeedEstimate:
    """
    Minimal speed of monotone fronts. The linear spreading speed 2√(σ r'(u_+))
    is reported as closed form only when r is concave between the endstates.
    """
    if u_minus < u_plus:
        return min_speed_estimate(r.reflected(), sigma, -u_minus, -u_plus, tol)
    d2 = r.poly.deriv(2)(np.linspace(u_plus, u_minus, 257))
    concave = bool(np.all(d2 <= 1e-12))
    slope = r.derivative(u_plus)
    closed = 2.0 * math.sqrt(sigma * slope) if concave and slope > 0 else None
    shooting, iterations = locate_tail_transition(r, sigma, u_minus, u_plus, tol=tol)
    if closed is not None and abs(closed - shooting) > 10 * tol:
        logger.warning("minimal speed: closed form %.6g vs shooting %.6g", closed, shooting)
    return MinSpeedEstimate(closed, shooting, concave, iterations)


# -------------------------------------------------------------------
# 5) Reaction-diffusion dispatch and KdV-Burgers
# -------------------------------------------------------------------


def solve_rd_tw(
    r: ReactionSpec,
    sigma: float,
    c: float,
    u_left: float,
    u_right: float,
    tol: float = 1e-10,
    hp: float = PROFILE_STEP,
) -> TWSResult:
    """
    Front of σū'' + cū' + r(ū) = 0 from u_left to u_right with prescribed speed c.

    Negative speeds are handled by ξ ↦ -ξ, increasing fronts by u ↦ -u, so the
    solvers only see u_- > u_+ and c ≥ 0.
    """
    if c < 0:
        return _reverse_result(solve_rd_tw(r, sigma, -c, u_right, u_left, tol, hp))
    if u_left < u_right:
        return _reflect_result(solve_rd_tw(r.reflected(), sigma, c, -u_left, -u_right, tol, hp))

    label = classify_reaction(r, u_left, u_right)
    if label is ReactionClass.MONOSTABLE:
        return shoot_monostable(r, sigma, c, u_left, u_right, tol=max(tol, 1e-8), hp=hp)
    if label is ReactionClass.BISTABLE:
        res = shoot_bistable(r, sigma, u_left, u_right, tol=tol, hp=hp)
        if abs(res.speed - c) > config.SPEED_MATCH_TOL:
            raise NoTravelingWaveError(
                f"bistable fronts travel with the unique speed {res.speed:.8g}, not {c:.8g}",
                condition="uniqueness of the bistable wave speed",
                unique_speed=res.speed,
                requested_speed=c,
            )
        return res
    if label is ReactionClass.NEGATIVE_ON_INTERVAL:
        raise NoTravelingWaveError(
            "r < 0 between the endstates",
            condition="potential balance: sgn(c) = -sgn(∫r) fails for c ≥ 0",
            requested_speed=c,
            potential_gap=potential_gap(r, u_left, u_right),
        )
    if label is ReactionClass.UNSTABLE:
        raise NoTravelingWaveError(
            "both endstates are unstable",
            condition="unstable reaction: r'(u_-) > 0 and r'(u_+) > 0",
            requested_speed=c,
        )
    raise NonConvergenceError(f"reaction is {label.value} for these endstates", reaction_class=label.value)


def _solve_first_order(h: Polynomial, eps: float, u_minus: float, u_plus: float, hp: float) -> TWSResult:
    """εū' = h(ū), integrated from the mid level in both directions."""
    lo, hi = min(u_minus, u_plus), max(u_minus, u_plus)
    wanted = "-" if u_minus > u_plus else "+"
    pattern = interior_sign_pattern(ReactionSpec(h, kind="kdvb_h"), lo, hi)
    if pattern != wanted:
        raise NoTravelingWaveError(
            f"h has sign pattern {pattern!r} between the endstates, needs {wanted!r}",
            condition="h must keep the sign of u_+ - u_- between the endstates",
            sign_pattern=pattern,
        )
    dh = h.deriv()
    rate_left, rate_right = dh(u_minus) / eps, -dh(u_plus) / eps
    if rate_left <= 0 or rate_right <= 0:
        raise NoConnectionError("degenerate endstate: algebraic approach", rate_left=rate_left, rate_right=rate_right)

    delta_u = abs(u_minus - u_plus)
    mid = 0.5 * (u_minus + u_plus)
    coef = h.coef

    def rhs(xi, y):
        return [polyval(y[0], coef) / eps]

    def solve(target: float, rate: float, backward: bool):
        def near(xi, y):
            return abs(y[0] - target) - TAIL_FLOOR * delta_u

        near.terminal = True
        horizon = (math.log(1.0 / TAIL_FLOOR) + 5.0) / rate
        return solve_ivp(
            rhs,
            (0.0, -horizon if backward else horizon),
            [mid],
            method="DOP853",
            rtol=ODE_RTOL,
            atol=1e-3 * TAIL_FLOOR * delta_u,
            events=near,
            dense_output=True,
        )

    back = solve(u_minus, rate_left, backward=True)
    fwd = solve(u_plus, rate_right, backward=False)
    pieces = [
        (-math.inf, 0.0, lambda x: back.sol(np.maximum(x, back.t[-1]))[0]),
        (0.0, math.inf, lambda x: fwd.sol(np.minimum(x, fwd.t[-1]))[0]),
    ]
    hp = min(hp, 0.05 / max(rate_left, rate_right))
    profile = _sample(pieces, float(back.t[-1]), float(fwd.t[-1]), hp, u_minus, u_plus)
    return TWSResult(
        profile=profile,
        speed=math.nan,
        residual_sup=math.nan,
        monotone=is_monotone(profile),
        tail=TailGeometry.MONOTONE,
        diagnostics={"mapping": "first-order"},
    )


def kdvb_residual(profile: ProfileGrid, h: Polynomial, eps: float, delta: float) -> float:
    """sup |εū' + δū'' - h(ū)| on the interior."""
    d1, d2 = fd4_derivatives(profile.values, profile.h)
    return float(np.max(np.abs(eps * d1 + delta * d2 - h(profile.values[2:-2]))))


def solve_kdvb_tw(
    f: FluxSpec,
    eps: float,
    delta: float,
    triple: ShockTriple,
    tol: float = 1e-10,
    hp: float = PROFILE_STEP,
) -> TWSResult:
    """
    Traveling wave of u_t + f(u)_x = εu_xx + δu_xxx for the shock triple.

    The integrated profile equation h(ū) = εū' + δū'' is solved as
      δ > 0 : reaction-diffusion front with r = -h, σ = δ, speed ε,
      δ < 0 : reaction-diffusion front with r = h,  σ = |δ|, speed -ε,
      δ = 0 : first-order ODE εū' = h(ū).
    The reported speed is the shock speed c of the triple.
    """
    if eps <= 0:
        raise ConfigError(f"viscosity eps must be positive, got {eps}", eps=eps)
    r = kdvb_reaction(f, triple)
    h = kdvb_h(f, triple)
    original = classify_reaction(r, triple.u_minus, triple.u_plus)
    logger.info("KdV-Burgers triple %s: -h is %s", triple.to_dict(), original.value)

    try:
        if delta > 0:
            res = solve_rd_tw(r, delta, eps, triple.u_minus, triple.u_plus, tol=tol, hp=hp)
            mapping, rd_speed = "reaction-diffusion r = -h, sigma = delta", eps
        elif delta < 0:
            res = solve_rd_tw(r.negated(), -delta, -eps, triple.u_minus, triple.u_plus, tol=tol, hp=hp)
            mapping, rd_speed = "reaction-diffusion r = h, sigma = |delta|", -eps
        else:
            res = _solve_first_order(h, eps, triple.u_minus, triple.u_plus, hp)
            mapping, rd_speed = "first-order eps u' = h(u)", math.nan
    except NoTravelingWaveError as err:
        err.reason.setdefault("reaction_class", original.value)
        err.reason.setdefault("delta", delta)
        raise

    return dataclasses.replace(
        res,
        speed=triple.c,
        residual_sup=kdvb_residual(res.profile, h, eps, delta),
        diagnostics={
            **res.diagnostics,
            "mapping": mapping,
            "rd_speed": rd_speed,
            "reaction_class": original.value,
            "eps": eps,
            "delta": delta,
        },
    )


def kdvb_tail_transition(f: FluxSpec, delta: float, triple: ShockTriple, tol: float = 1e-3) -> tuple[float, float | None]:
    """
    Viscosity ε at which the KdV-Burgers front stops oscillating behind the shock
    (δ > 0): (shooting estimate, discriminant zero of ε² + 4δh'(u_+) when h'(u_+) < 0).
    """
    if delta <= 0:
        raise ConfigError("oscillation threshold is defined for delta > 0", delta=delta)
    r = kdvb_reaction(f, triple)
    shooting, _ = locate_tail_transition(r, delta, triple.u_minus, triple.u_plus, tol=tol)
    hprime = float(kdvb_h(f, triple).deriv()(triple.u_plus))
    predicted = math.sqrt(-4.0 * delta * hprime) if hprime < 0 else None
    return shooting, predicted
