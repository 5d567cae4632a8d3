# src/traveling_wave_lab/front_evolution.py

"""
Nonlocal traveling waves, measured two ways.

1) Time evolution  u_t = L u + r(u) - ∂x(f(u) - c_f u)  on [-L, L] with a
   second-order exponential (ETD2) stepper. The periodic part of the discrete
   operator's own stencil is integrated exactly in Fourier space on the
   perturbation v = u - φ_bg of a fixed tanh background φ_bg; the rest of
   the real-space action, reaction and advection are explicit, so stationary
   and traveling profiles solve the same discrete equation as the residual.
   Fronts are tracked at the mid level and collapsed in the co-moving frame.

2) Direct marching of the fractional profile equation ε D^α_+ ū = h(ū)
   (fractal KdV-Burgers with δ = 0) with Grünwald-Letnikov weights, started
   on the linearized exponential tail at u_-.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
import pandas as pd
from numpy.polynomial import Polynomial
from scipy.integrate import trapezoid
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score
from tqdm import tqdm

from . import config
from .errors import (
    ConfigError,
    InputError,
    InstabilityError,
    NonConvergenceError,
    NotConvergedError,
    NoTravelingWaveError,
    UnsupportedParameterError,
)
from .grids import KernelSpec, ProfileGrid, fd4_derivatives
from .levy_ops import RieszFellerParams, apply_riesz_feller, caputo_to_riesz_feller, gl_weights, kernel_moments
from .nonlinearities import FluxSpec, ReactionSpec, ShockTriple, kdvb_h
from .operators import (
    ConvolutionOperator,
    EvolutionOperator,
    FowlerOperator,
    RieszFellerOperator,
    fowler_unstable_band,
)
from .phase_plane import TailGeometry, TWSResult, is_monotone, solve_kdvb_tw, tail_geometry
from .shock_classify import ReactionClass, classify_reaction, is_convex_on, lax_condition, require_rankine_hugoniot

logger = logging.getLogger(__name__)

PINNED_CELLS = 2
BLOWUP_FACTOR = 10.0
FIT_R2 = 0.999
AGREE_TOL = 1e-3
RESIDUAL_WINDOW = 0.5
GL_STEP_MAX = 0.01
GL_TAIL_START = 1e-4
TAIL_FLOOR = 1e-14

NO_FRONT_CONDITIONS = {
    ReactionClass.NEGATIVE_ON_INTERVAL: "r < 0 between the endstates",
    ReactionClass.UNSTABLE: "unstable reaction: r'(u_-) > 0 and r'(u_+) > 0",
}


# -------------------------------------------------------------------
# 1) Evolution
# -------------------------------------------------------------------


@dataclass(frozen=True)
class EvolutionSpec:
    """
    Evolution problem on x ∈ [-L, L] with n points.

    ``frame_speed`` c_f solves in the frame ξ = x - c_f t; tracked slopes are
    relative to that frame. ``dt = None`` picks
    min(operator guard 0.25·h^order/σ, 0.1/Lip(r), 0.5·h/max|f' - c_f|).
    """

    operator: EvolutionOperator
    u_minus: float
    u_plus: float
    reaction: ReactionSpec | None = None
    flux: FluxSpec | None = None
    L: float = 50.0
    n: int = 2048
    dt: float | None = None
    T: float = 40.0
    frame_speed: float = 0.0
    snapshots: int = 101

    def __post_init__(self) -> None:
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ConfigError(f"half-width L must be positive, got {self.L}", L=self.L)
        if self.n < 64:
            raise ConfigError(f"need at least 64 grid points, got {self.n}", n=self.n)
        if not self.T > 0:
            raise ConfigError(f"horizon T must be positive, got {self.T}", T=self.T)
        if self.dt is not None and not self.dt > 0:
            raise ConfigError(f"time step must be positive, got {self.dt}", dt=self.dt)
        if self.snapshots < 2:
            raise ConfigError("need at least two snapshots", snapshots=self.snapshots)

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.n - 1)

    def default_dt(self) -> float:
        h = self.h
        limits = [self.operator.dt_limit(h)]
        lo, hi = min(self.u_minus, self.u_plus), max(self.u_minus, self.u_plus)
        if self.reaction is not None:
            lip = self.reaction.lipschitz(lo, hi)
            if lip > 0:
                limits.append(0.1 / lip)
        if self.flux is not None:
            u = np.linspace(lo, hi, 65)
            speed = float(np.max(np.abs(self.flux.derivative(u) - self.frame_speed)))
            if speed > 0:
                limits.append(0.5 * h / speed)
        return min(limits)

    def to_dict(self) -> dict[str, Any]:
        return {
            "operator": self.operator.to_dict(),
            "u_minus": self.u_minus,
            "u_plus": self.u_plus,
            "reaction": None if self.reaction is None else self.reaction.to_dict(),
            "flux": None if self.flux is None else self.flux.to_dict(),
            "L": self.L,
            "n": self.n,
            "dt": self.dt if self.dt is not None else self.default_dt(),
            "T": self.T,
            "frame_speed": self.frame_speed,
        }


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    snapshots: tuple[ProfileGrid, ...]
    dt: float
    steps: int
    frame_speed: float = 0.0

    @property
    def final(self) -> ProfileGrid:
        return self.snapshots[-1]

    def frame(self, every: int = 1) -> pd.DataFrame:
        """Long table (t, xi, u) of every ``every``-th snapshot."""
        parts = [
            pd.DataFrame({"t": t, "xi": s.xi, "u": s.values})
            for t, s in list(zip(self.times, self.snapshots))[::every]
        ]
        return pd.concat(parts, ignore_index=True)


def _phi1(z: np.ndarray) -> np.ndarray:
    """(e^z - 1)/z with the removable singularity filled."""
    out = np.ones_like(z)
    big = np.abs(z) > 1e-12
    out[big] = np.expm1(z[big]) / z[big]
    return out


def _phi2(z: np.ndarray) -> np.ndarray:
    """(e^z - 1 - z)/z², Taylor series near 0."""
    small = np.abs(z) < 1e-2
    out = 0.5 + z / 6.0 + z**2 / 24.0 + z**3 / 120.0
    big = ~small
    out[big] = (np.expm1(z[big]) - z[big]) / z[big] ** 2
    return out


class _LinearPart:
    """
    Exact discrete linear operator on the perturbation v (zero far fields).

    ``symbol`` is the periodic multiplier integrated exactly by the stepper;
    ``correction(v)`` is what the non-periodic action adds to it (wrap-around
    of the long stencil), carried explicitly.
    """

    def __init__(self, operator: EvolutionOperator, n: int, h: float) -> None:
        stencil = operator.stencil(n, h)
        self.n = n
        self.symbol = operator.discrete_symbol(n, h)
        self.size = 1 << (3 * n - 3).bit_length()
        self._stencil_hat = np.fft.rfft(stencil[::-1], self.size)

    def action(self, v: np.ndarray) -> np.ndarray:
        full = np.fft.irfft(np.fft.rfft(v, self.size) * self._stencil_hat, self.size)
        return full[self.n - 1 : 2 * self.n - 1]

    def correction(self, v: np.ndarray, v_hat: np.ndarray) -> np.ndarray:
        return self.action(v) - np.fft.ifft(self.symbol * v_hat).real


def _background(left: float, right: float, L: float, n: int) -> ProfileGrid:
    if left == right:
        return ProfileGrid.from_function(lambda x: np.full_like(x, left), -L, L, n, left, right)
    return ProfileGrid.tanh_ramp(left, right, L, n)


def evolve(spec: EvolutionSpec, u0: ProfileGrid | None = None, show_progress: bool | None = None) -> Trajectory:
    """
    March the evolution equation to T, recording ``spec.snapshots`` snapshots.

    The far-field states are those of u0 (default: tanh ramp of width 1 between
    u_- and u_+); the two outermost cells on each side are pinned to them.
    """
    show_progress = config.SHOW_PROGRESS if show_progress is None else show_progress
    L, n = spec.L, spec.n
    if u0 is None:
        u0 = ProfileGrid.tanh_ramp(spec.u_minus, spec.u_plus, L, n)
    u0.require_finite()
    left, right = u0.left_state, u0.right_state
    bg = _background(left, right, L, n)
    x, h = bg.xi, bg.h
    values = u0.evaluate(x)

    dt = spec.dt if spec.dt is not None else spec.default_dt()
    steps = max(1, math.ceil(spec.T / dt - 1e-9))
    dt = spec.T / steps
    record = set(np.unique(np.round(np.linspace(0, steps, spec.snapshots)).astype(int)).tolist())

    linear = _LinearPart(spec.operator, n, h)
    z = linear.symbol * dt
    growth = np.exp(z)
    forcing = dt * _phi1(z)
    difference = dt * _phi2(z)
    background_action = spec.operator.apply(bg).values
    mid = 0.5 * (left + right)
    bound = BLOWUP_FACTOR * max(abs(right - left), abs(left), abs(right), 1.0)

    def nonlinear(u: np.ndarray, v: np.ndarray, v_hat: np.ndarray) -> np.ndarray:
        out = background_action + linear.correction(v, v_hat)
        if spec.reaction is not None:
            out += spec.reaction(u)
        if spec.flux is not None or spec.frame_speed != 0.0:
            transport = -spec.frame_speed * u
            if spec.flux is not None:
                transport = transport + spec.flux(u)
            out -= np.gradient(transport, h)
        return out

    v = values - bg.values
    v_hat = np.fft.fft(v)
    previous = None
    times, snaps = [0.0], [bg.with_values(values)]
    logger.info("evolution: %d ETD2 steps of dt = %.3e on %d points (%s)", steps, dt, n, spec.operator.name)

    for step in tqdm(range(1, steps + 1), desc="Time steps", disable=not show_progress):
        u = bg.values + v
        current = np.fft.fft(nonlinear(u, v, v_hat))
        v_hat = growth * v_hat + forcing * current
        if previous is not None:
            v_hat = v_hat + difference * (current - previous)
        previous = current
        v = np.fft.ifft(v_hat).real
        v[:PINNED_CELLS] = left - bg.values[:PINNED_CELLS]
        v[-PINNED_CELLS:] = right - bg.values[-PINNED_CELLS:]
        v_hat = np.fft.fft(v)

        u = bg.values + v
        if not np.all(np.isfinite(u)) or np.max(np.abs(u - mid)) > bound:
            raise InstabilityError(
                f"solution left the admissible range at t = {step * dt:.4g}; reduce dt",
                t=step * dt,
                dt=dt,
                suggested_dt=0.5 * dt,
            )
        if step in record:
            times.append(step * dt)
            snaps.append(bg.with_values(u))

    return Trajectory(np.array(times), tuple(snaps), dt, steps, spec.frame_speed)


# -------------------------------------------------------------------
# 2) Front tracking and co-moving profile
# -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FrontTrace:
    times: np.ndarray
    positions: np.ndarray
    slope: float
    intercept: float
    r2: float
    ambiguous: bool
    frame_speed: float = 0.0

    @property
    def speed_fit(self) -> tuple[float, float]:
        return self.slope, self.r2

    @property
    def converged(self) -> bool:
        return self.r2 >= FIT_R2

    @property
    def speed(self) -> float:
        """Speed in the laboratory frame."""
        return self.frame_speed + self.slope

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.times, "position": self.positions})

    def to_dict(self) -> dict[str, Any]:
        return {
            "slope": self.slope,
            "speed": self.speed,
            "r2": self.r2,
            "converged": self.converged,
            "ambiguous": self.ambiguous,
            "frame_speed": self.frame_speed,
        }


def level_crossings(grid: ProfileGrid, level: float) -> np.ndarray:
    """Positions where the samples cross ``level``, by linear interpolation."""
    d = grid.values - level
    idx = np.nonzero((d[:-1] == 0.0) | (d[:-1] * d[1:] < 0.0))[0]
    d0, d1 = d[idx], d[idx + 1]
    frac = np.where(d0 == 0.0, 0.0, d0 / np.where(d0 == d1, 1.0, d0 - d1))
    return grid.xi0 + grid.h * (idx + frac)


def track_front(traj: Trajectory, level: float | None = None) -> FrontTrace:
    """Leftmost mid-level crossing per snapshot; least-squares speed over the last half of the run."""
    level = traj.snapshots[0].mid_level if level is None else level
    positions = np.full(len(traj.snapshots), np.nan)
    ambiguous = False
    for i, snap in enumerate(traj.snapshots):
        crossings = level_crossings(snap, level)
        if crossings.size:
            positions[i] = crossings[0]
            ambiguous |= crossings.size > 1

    late = slice(len(positions) // 2, None)
    t, y = traj.times[late], positions[late]
    if np.any(np.isnan(y)):
        raise NotConvergedError("front lost during the second half of the run", level=level)
    model = LinearRegression().fit(t.reshape(-1, 1), y)
    if np.ptp(y) <= 1e-9 * (1.0 + np.max(np.abs(y))):
        r2 = 1.0
    else:
        r2 = float(r2_score(y, model.predict(t.reshape(-1, 1))))
    if ambiguous:
        logger.warning("several mid-level crossings: tracking the leftmost one")
    return FrontTrace(
        times=traj.times,
        positions=positions,
        slope=float(model.coef_[0]),
        intercept=float(model.intercept_),
        r2=r2,
        ambiguous=ambiguous,
        frame_speed=traj.frame_speed,
    )


def extract_profile(traj: Trajectory, trace: FrontTrace, agree_tol: float = AGREE_TOL) -> ProfileGrid:
    """
    Final snapshot with its mid-level crossing moved to ξ = 0, after checking that
    a snapshot at three quarters of the run collapses onto it in the co-moving frame.
    """
    if not trace.converged:
        raise NotConvergedError(f"front speed fit has r² = {trace.r2:.6f} < {FIT_R2}", r2=trace.r2)
    final = traj.final
    i_late = int(0.75 * (len(traj.snapshots) - 1))
    earlier = traj.snapshots[i_late]
    shift_final = trace.positions[-1]
    shift_earlier = shift_final - trace.slope * (traj.times[-1] - traj.times[i_late])

    margin = PINNED_CELLS * final.h + abs(shift_final - shift_earlier)
    xi = final.xi - shift_final
    inside = (final.xi > final.xi0 + margin) & (final.xi < final.xi_max - margin)
    diff = np.abs(final.values[inside] - earlier.evaluate(xi[inside] + shift_earlier))
    gap = float(np.max(diff)) if diff.size else math.inf
    if gap > agree_tol:
        raise NotConvergedError(
            f"late snapshots differ by {gap:.3e} in the co-moving frame", gap=gap, tolerance=agree_tol
        )
    logger.info("co-moving collapse: sup difference %.3e", gap)
    return final.shifted(-shift_final)


def _central(profile: ProfileGrid, fraction: float) -> np.ndarray:
    """Mask of the interior points [2:-2] lying in the central ``fraction`` of the window."""
    xi = profile.xi[2:-2]
    half = 0.5 * fraction * (profile.xi_max - profile.xi0)
    centre = 0.5 * (profile.xi_max + profile.xi0)
    return np.abs(xi - centre) <= half


def evolution_twe_residual(
    operator: EvolutionOperator,
    reaction: ReactionSpec,
    profile: ProfileGrid,
    c: float,
    window: float = RESIDUAL_WINDOW,
) -> float:
    """sup |cū' + Lū + r(ū)| over the central part of the window."""
    d1, _ = fd4_derivatives(profile.values, profile.h)
    action = operator.apply(profile).values[2:-2]
    res = c * d1 + action + reaction(profile.values[2:-2])
    return float(np.max(np.abs(res[_central(profile, window)])))


def _evolution_result(
    spec: EvolutionSpec,
    traj: Trajectory,
    reaction: ReactionSpec,
    label: ReactionClass,
) -> TWSResult:
    trace = track_front(traj)
    profile = extract_profile(traj, trace)
    residual = evolution_twe_residual(spec.operator, reaction, profile, trace.speed)
    monotone = is_monotone(profile)
    if isinstance(spec.operator, RieszFellerOperator) and spec.operator.params.a == 2.0:
        tail = tail_geometry(spec.operator.sigma, trace.speed, reaction.derivative(profile.right_state))
    else:
        tail = TailGeometry.MONOTONE if monotone else TailGeometry.OSCILLATORY
    if residual > 1e-3:
        logger.warning("profile residual %.3e above 1e-3", residual)
    return TWSResult(
        profile=profile,
        speed=trace.speed,
        residual_sup=residual,
        monotone=monotone,
        tail=tail,
        iterations=traj.steps,
        diagnostics={
            "reaction_class": label.value,
            "r2": trace.r2,
            "ambiguous": trace.ambiguous,
            "dt": traj.dt,
            "h": profile.h,
            "evolution": spec.to_dict(),
        },
    )


def solve_rd_riesz_feller_tw(
    p: RieszFellerParams,
    r: ReactionSpec,
    u_minus: float,
    u_plus: float,
    sigma: float = 1.0,
    L: float = 50.0,
    n: int = 2048,
    dt: float | None = None,
    T: float = 60.0,
    u0: ProfileGrid | None = None,
    show_progress: bool | None = None,
) -> TWSResult:
    """Bistable front of u_t = σ D^a_θ u + r(u), 1 < a ≤ 2, by evolve → track → extract."""
    if not (1.0 < p.a <= 2.0):
        raise UnsupportedParameterError(f"front evolution needs 1 < a ≤ 2, got a = {p.a}", a=p.a)
    label = classify_reaction(r, u_minus, u_plus)
    if label in NO_FRONT_CONDITIONS:
        raise NoTravelingWaveError(
            f"no front between u_- = {u_minus} and u_+ = {u_plus}: reaction is {label.value}",
            condition=NO_FRONT_CONDITIONS[label],
            reaction_class=label.value,
        )
    if label is not ReactionClass.BISTABLE:
        raise ConfigError(f"Riesz-Feller fronts need a bistable reaction, got {label.value}", reaction_class=label.value)
    spec = EvolutionSpec(RieszFellerOperator(p, sigma), u_minus, u_plus, reaction=r, L=L, n=n, dt=dt, T=T)
    traj = evolve(spec, u0, show_progress)
    return _evolution_result(spec, traj, r, label)


def solve_convolution_rd_tw(
    J: KernelSpec,
    r: ReactionSpec,
    u_minus: float,
    u_plus: float,
    L: float = 50.0,
    n: int = 2048,
    dt: float | None = None,
    T: float = 60.0,
    u0: ProfileGrid | None = None,
    show_progress: bool | None = None,
) -> TWSResult:
    """Front of u_t = J∗u - u + r(u)."""
    label = classify_reaction(r, u_minus, u_plus)
    moments = kernel_moments(J)
    if label is ReactionClass.BISTABLE and moments.heavy_tailed:
        logger.warning("kernel looks heavy-tailed: ∫|y|J may be infinite (first moment %.3g)", moments.first_abs)
    if label is ReactionClass.MONOSTABLE and (moments.heavy_tailed or not J.exponential_moment):
        logger.warning(
            "monostable reaction with a kernel lacking an exponential moment: "
            "fronts are only guaranteed for bistable reactions"
        )
    if label not in (ReactionClass.BISTABLE, ReactionClass.MONOSTABLE):
        raise NoTravelingWaveError(
            f"no front for a {label.value} reaction",
            condition="reaction must be bistable or monostable between the endstates",
            reaction_class=label.value,
        )
    spec = EvolutionSpec(ConvolutionOperator(J), u_minus, u_plus, reaction=r, L=L, n=n, dt=dt, T=T)
    traj = evolve(spec, u0, show_progress)
    res = _evolution_result(spec, traj, r, label)
    return dataclasses.replace(
        res, diagnostics={**res.diagnostics, "first_abs_moment": moments.first_abs, "heavy_tailed": moments.heavy_tailed}
    )


# -------------------------------------------------------------------
# 3) Fractional KdV-Burgers profile equation (δ = 0)
# -------------------------------------------------------------------


def caputo_plus(profile: ProfileGrid, alpha: float) -> np.ndarray:
    """D^α_+ ū through the singular-integral quadrature of -D^α_{-α}."""
    return -apply_riesz_feller(caputo_to_riesz_feller(alpha), profile).values


def fkdvb_twe_residual(
    profile: ProfileGrid, f: FluxSpec, eps: float, alpha: float, triple: ShockTriple
) -> float:
    """sup |ε D^α_+ ū - h(ū)| on the interior; D^α_+ only looks left."""
    h = kdvb_h(f, triple)
    res = eps * caputo_plus(profile, alpha) - h(profile.values)
    return float(np.max(np.abs(res[2:-2])))


def fowler_twe_residual(
    profile: ProfileGrid, f: FluxSpec, eps: float, delta: float, alpha: float, triple: ShockTriple
) -> float:
    """sup |h(ū) - δū' + ε D^α_+ ū| on the interior."""
    h = kdvb_h(f, triple)
    d1, _ = fd4_derivatives(profile.values, profile.h)
    frac = caputo_plus(profile, alpha)[2:-2]
    return float(np.max(np.abs(h(profile.values[2:-2]) - delta * d1 + eps * frac)))


def necessary_condition_integrals(profile: ProfileGrid, alpha: float, h: Polynomial) -> tuple[float, float]:
    """
    ∫_{-∞}^{ξ} h(ū)ū' dy = H(ū(ξ)) - H(u_-) with H' = h, exact for polynomials.

    Returns the value at ξ = +∞ (∫_{u_-}^{u_+} h) and the minimum over ξ of the
    running integral. A profile of ε D^α_+ ū = h(ū) makes both equal to
    ε∫ū' D^α_+ ū ≥ 0. ``alpha`` is kept for symmetry with ``caputo_energy``.
    """
    caputo_to_riesz_feller(alpha)
    H = h.integ()
    base = H(profile.left_state)
    running = H(profile.values) - base
    total = float(H(profile.right_state) - base)
    return total, float(min(0.0, np.min(running), total))


def caputo_energy(profile: ProfileGrid, alpha: float) -> float:
    """∫ ū' D^α_+ ū dξ (non-negative for any front)."""
    d1 = np.gradient(profile.values, profile.h)
    return float(trapezoid(d1 * caputo_plus(profile, alpha), profile.xi))


def tail_coefficient(eps: float, alpha: float, u_minus: float, u_plus: float, slope_plus: float) -> float | None:
    """
    C in ū ≈ u_+ + C ξ^{-α} as ξ → ∞ (ξ measured from the front).

    Far from the front D^α_+ ū ≈ (u_+ - u_-) ξ^{-α}/Γ(1-α), and the profile
    equation balances it against h'(u_+)(ū - u_+). None when h'(u_+) = 0.
    """
    if slope_plus >= 0:
        return None
    return eps * (u_plus - u_minus) / (math.gamma(1.0 - alpha) * slope_plus)


def _extrapolated_endstate(
    xi: np.ndarray, u: np.ndarray, alpha: float, leading: float | None = None
) -> tuple[float, float]:
    """
    Least-squares u ≈ u_∞ + C ξ^{-α} + D ξ^{-2α} + E ξ^{-β} on the last half of
    ξ > 0, β = min(3α, 1+α); returns (u_∞, r²).

    ``leading`` fixes C. E is dropped when β is too close to 2α to be told apart.
    """
    tail = xi >= 0.5 * xi[-1]
    x, y = xi[tail], u[tail]
    beta = min(3.0 * alpha, 1.0 + alpha)
    columns = [x ** (-2.0 * alpha)]
    if beta - 2.0 * alpha >= 0.25:
        columns.append(x ** (-beta))
    known = np.zeros_like(y) if leading is None else leading * x ** (-alpha)
    if leading is None:
        columns.insert(0, x ** (-alpha))
    X = np.column_stack(columns)
    model = LinearRegression().fit(X, y - known)
    return float(model.intercept_), float(r2_score(y, known + model.predict(X)))


def _prehistory_sums(w: np.ndarray, q: float, n: int) -> np.ndarray:
    """
    T_j = Σ_{m≥1} w_{j+m} q^m for j < n, by the backward recursion
    T_{j-1} = q (w_j + T_j), stable for q < 1.
    """
    out = np.empty(n + 1)
    out[n] = w[n + 1] * q / (1.0 - q)
    for j in range(n, 0, -1):
        out[j - 1] = q * (w[j] + out[j])
    return out[:n]


def march_fractional_twe(
    f: FluxSpec,
    eps: float,
    alpha: float,
    triple: ShockTriple,
    h: float | None = None,
    xi_max: float = 400.0,
    amplitude: float = GL_TAIL_START,
    newton_tol: float = 1e-13,
) -> TWSResult:
    """
    Profile of ε D^α_+ ū = h(ū), h(u) = f(u) - f(u_-) - c(u - u_-).

    Grid points ξ_j = jh, j ≥ 0, are solved one after the other (implicit in
    ū_j, Newton). Before ξ_0 the profile is the linearized tail
    u_- - A e^{μξ}, with μ chosen so that the discrete weights reproduce the
    continuous rate λ = (h'(u_-)/ε)^{1/α} exactly; its contribution to the
    history sum is summed in closed form.
    """
    caputo_to_riesz_feller(alpha)
    if eps <= 0:
        raise ConfigError(f"viscosity eps must be positive, got {eps}", eps=eps)
    require_rankine_hugoniot(f, triple)
    u_minus, u_plus = triple.u_minus, triple.u_plus
    lo, hi = triple.lo, triple.hi
    convex = is_convex_on(f, lo, hi)
    if convex and not lax_condition(f, triple):
        raise NoTravelingWaveError(
            "convex flux: a front needs Lax' entropy condition u_- > u_+",
            condition="Lax entropy condition",
            u_minus=u_minus,
            u_plus=u_plus,
        )
    hpoly = kdvb_h(f, triple)
    label = classify_reaction(ReactionSpec(-hpoly, kind="kdvb"), u_minus, u_plus)
    if label is not ReactionClass.MONOSTABLE:
        raise NoTravelingWaveError(
            f"-h is {label.value}; the first-order fractional profile equation needs it monostable",
            condition="-h monostable between u_+ and u_-",
            reaction_class=label.value,
        )
    conjectural = not convex
    if conjectural:
        logger.warning("non-convex flux: fractional front is an experiment, not a theorem")

    slope = float(hpoly.deriv()(u_minus))
    lam = (slope / eps) ** (1.0 / alpha)
    step = min(0.05 / lam, GL_STEP_MAX) if h is None else h
    if step * lam >= 1.0:
        raise ConfigError(f"step h = {step} too coarse for the tail rate {lam:.4g}", h=step, rate=lam)
    mu = -math.log1p(-step * lam) / step

    delta_u = u_minus - u_plus
    A = amplitude * delta_u
    n = int(math.ceil(xi_max / step)) + 1
    w = gl_weights(alpha, n + 2)
    prehistory = _prehistory_sums(w, math.exp(-mu * step), n)
    scale = eps * step ** (-alpha)
    coef = hpoly.coef
    dcoef = hpoly.deriv().coef
    pv = np.polynomial.polynomial.polyval

    dev = np.empty(n)  # ū_j - u_-
    guess = -A
    for j in range(n):
        history = float(np.dot(w[1 : j + 1], dev[j - 1 :: -1])) if j else 0.0
        history -= A * prehistory[j]
        x = guess
        for _ in range(50):
            u = u_minus + x
            g = scale * (x + history) - pv(u, coef)
            dg = scale - pv(u, dcoef)
            dx = g / dg
            x -= dx
            if abs(dx) <= newton_tol * (1.0 + abs(x)):
                break
        else:
            raise NonConvergenceError("Newton step of the marching scheme did not converge", xi=j * step)
        dev[j] = x
        if not (lo - delta_u <= u_minus + x <= hi + delta_u):
            raise NonConvergenceError("marching left the admissible range", xi=j * step, u=u_minus + x)
        guess = x

    values = u_minus + dev
    n_pre = int(math.ceil(math.log(amplitude / TAIL_FLOOR) / (mu * step)))
    pre = u_minus - A * np.exp(mu * step * np.arange(-n_pre, 0))
    full = np.concatenate([pre, values])
    xi_full = step * np.arange(-n_pre, n)

    mid = 0.5 * (u_minus + u_plus)
    raw = ProfileGrid(xi_full[0], step, full, u_minus, u_plus)
    crossings = level_crossings(raw, mid)
    if not crossings.size:
        raise NotConvergedError("profile never reaches the mid level; increase xi_max", xi_max=xi_max)
    profile = raw.shifted(-crossings[0])

    leading = tail_coefficient(eps, alpha, u_minus, u_plus, float(hpoly.deriv()(u_plus)))
    inner = profile.xi > 0
    xi_tail, u_tail = profile.xi[inner], profile.values[inner]
    u_inf, tail_r2 = _extrapolated_endstate(xi_tail, u_tail, alpha, leading)
    endstate_error = abs(u_inf - u_plus)
    if endstate_error > 1e-3:
        logger.warning("extrapolated endstate %.6g misses u_+ = %.6g by %.3e", u_inf, u_plus, endstate_error)
    # same extrapolation from a march stopped halfway
    half = xi_tail <= 0.5 * xi_tail[-1]
    u_half, _ = _extrapolated_endstate(xi_tail[half], u_tail[half], alpha, leading)
    refinement = abs(u_inf - u_half)
    if refinement > AGREE_TOL:
        logger.warning("endstate moves by %.3e between xi_max/2 and xi_max", refinement)

    nc_total, nc_min = necessary_condition_integrals(profile, alpha, hpoly)
    residual = fkdvb_twe_residual(profile, f, eps, alpha, triple)
    return TWSResult(
        profile=profile,
        speed=triple.c,
        residual_sup=residual,
        monotone=is_monotone(profile),
        tail=TailGeometry.MONOTONE,
        iterations=n,
        conjectural=conjectural,
        diagnostics={
            "alpha": alpha,
            "eps": eps,
            "tail_rate": lam,
            "discrete_tail_rate": mu,
            "step": step,
            "endstate_extrapolated": u_inf,
            "endstate_error": endstate_error,
            "endstate_fit_r2": tail_r2,
            "endstate_refinement": refinement,
            "tail_coefficient": leading,
            "endstate_at_xi_max": float(values[-1]),
            "nc_global": nc_total,
            "nc_running_min": nc_min,
        },
    )


def alpha_continuation(
    f: FluxSpec,
    eps: float,
    triple: ShockTriple,
    alphas: Sequence[float] = (0.5, 0.7, 0.9, 0.95),
    xi_max: float = 200.0,
    show_progress: bool | None = None,
) -> pd.DataFrame:
    """fKdVB fronts for α → 1 against the viscous shock εū' = h(ū) of the local problem."""
    show_progress = config.SHOW_PROGRESS if show_progress is None else show_progress
    viscous = solve_kdvb_tw(f, eps, 0.0, triple).profile
    rows = []
    for alpha in tqdm(alphas, desc="alpha", disable=not show_progress):
        res = march_fractional_twe(f, eps, alpha, triple, xi_max=xi_max)
        window = np.abs(res.profile.xi) <= 20.0
        distance = np.max(np.abs(res.profile.values[window] - viscous.evaluate(res.profile.xi[window])))
        rows.append(
            {
                "alpha": alpha,
                "distance_to_viscous": float(distance),
                "residual_sup": res.residual_sup,
                "endstate_error": res.diagnostics["endstate_error"],
                "monotone": res.monotone,
            }
        )
    return pd.DataFrame(rows)


def fkdvb_endstate_scan(
    f: FluxSpec,
    eps: float,
    alpha: float,
    u_minus: float,
    u_plus_values: Sequence[float],
    xi_max: float = 200.0,
    show_progress: bool | None = None,
) -> pd.DataFrame:
    """
    March ε D^α_+ ū = h(ū) for each u_+ at fixed u_- and record where a front is found.

    For non-convex fluxes the admissible set is only conjectured, so every row
    carries the ``conjectural`` flag of its run; rejected endstates keep the
    violated condition.
    """
    show_progress = config.SHOW_PROGRESS if show_progress is None else show_progress
    rows = []
    for u_plus in tqdm(u_plus_values, desc="u_+", disable=not show_progress):
        row: dict[str, Any] = {"u_minus": u_minus, "u_plus": float(u_plus), "front": False}
        try:
            triple = ShockTriple.from_flux(f, u_minus, float(u_plus))
            res = march_fractional_twe(f, eps, alpha, triple, xi_max=xi_max)
        except NoTravelingWaveError as err:
            row["condition"] = err.condition
        except (NonConvergenceError, InputError) as err:
            row["condition"] = type(err).__name__
        else:
            row.update(
                front=True,
                condition=None,
                speed=res.speed,
                monotone=res.monotone,
                endstate_error=res.diagnostics["endstate_error"],
                conjectural=res.conjectural,
            )
        rows.append(row)
    df = pd.DataFrame(rows)
    logger.info("fKdVB scan at u_- = %g: %d fronts out of %d endstates", u_minus, int(df["front"].sum()), len(df))
    return df


# -------------------------------------------------------------------
# 4) Fowler's equation (exploratory)
# -------------------------------------------------------------------


@dataclass
class FowlerReport:
    eps: float
    delta: float
    alpha: float
    triple: ShockTriple
    unstable_band: float
    max_growth: float
    front_found: bool
    speed: float | None
    r2: float | None
    nc_lhs: float
    nc_diffusive: float | None
    nc_fractional: float | None
    residual_sup: float | None
    overshoot: float
    undershoot: float
    conjectural: bool = True
    trajectory: Trajectory | None = field(default=None, repr=False)
    profile: ProfileGrid | None = field(default=None, repr=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "eps": self.eps,
            "delta": self.delta,
            "alpha": self.alpha,
            "triple": self.triple.to_dict(),
            "unstable_band": self.unstable_band,
            "max_growth": self.max_growth,
            "front_found": self.front_found,
            "speed": self.speed,
            "r2": self.r2,
            "nc_lhs": self.nc_lhs,
            "nc_diffusive": self.nc_diffusive,
            "nc_fractional": self.nc_fractional,
            "nc_balance": None
            if self.nc_diffusive is None
            else self.nc_lhs - (self.nc_diffusive - self.nc_fractional),
            "residual_sup": self.residual_sup,
            "overshoot": self.overshoot,
            "undershoot": self.undershoot,
            "conjectural": self.conjectural,
            "comparison_principle": False,
        }


def fowler_experiment(
    f: FluxSpec,
    eps: float,
    delta: float,
    alpha: float,
    triple: ShockTriple,
    u0: ProfileGrid | None = None,
    L: float = 100.0,
    n: int = 2048,
    dt: float | None = None,
    T: float = 40.0,
    show_progress: bool | None = None,
) -> FowlerReport:
    """
    Evolve u_t + f(u)_x = δu_xx - ε∂x D^α u in the frame of the shock speed and
    report what happens: linear growth band, tracked front if any, and both
    sides of ∫_{u_-}^{u_+} h = δ∫ū'² - ε∫ū' D^α ū on the extracted profile.
    No existence claim is made.
    """
    require_rankine_hugoniot(f, triple)
    operator = FowlerOperator(eps, delta, alpha)
    k = 2.0 * np.pi * np.fft.rfftfreq(n, d=2.0 * L / (n - 1))
    band = fowler_unstable_band(eps, delta, alpha)
    spec = EvolutionSpec(
        operator,
        triple.u_minus,
        triple.u_plus,
        flux=f,
        L=L,
        n=n,
        dt=dt,
        T=T,
        frame_speed=triple.c,
    )
    traj = evolve(spec, u0, show_progress)
    H = kdvb_h(f, triple).integ()
    nc_lhs = float(H(triple.u_plus) - H(triple.u_minus))
    final = traj.final.values

    speed = r2 = nc_diff = nc_frac = residual = None
    profile = None
    try:
        trace = track_front(traj)
        if trace.converged:
            profile = extract_profile(traj, trace)
            speed, r2 = trace.speed, trace.r2
            d1 = np.gradient(profile.values, profile.h)
            nc_diff = float(delta * trapezoid(d1 * d1, profile.xi))
            nc_frac = float(eps * caputo_energy(profile, alpha))
            residual = fowler_twe_residual(profile, f, eps, delta, alpha, triple)
        else:
            r2 = trace.r2
    except NotConvergedError as err:
        logger.info("Fowler run without a traveling front: %s", err.message)

    return FowlerReport(
        eps=eps,
        delta=delta,
        alpha=alpha,
        triple=triple,
        unstable_band=band,
        max_growth=float(np.max(operator.linear_growth(k))),
        front_found=profile is not None,
        speed=speed,
        r2=r2,
        nc_lhs=nc_lhs,
        nc_diffusive=nc_diff,
        nc_fractional=nc_frac,
        residual_sup=residual,
        overshoot=float(np.max(final) - triple.hi),
        undershoot=float(triple.lo - np.min(final)),
        trajectory=traj,
        profile=profile,
    )
