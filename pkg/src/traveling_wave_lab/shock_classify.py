# src/traveling_wave_lab/shock_classify.py

"""
Admissibility of shock triples and classification of reaction terms.

Shocks: Rankine-Hugoniot, Lax and Oleinik conditions, undercompressive types.
Reactions: monostable / bistable / unstable labels for endstates u_- > u_+,
potential balance, and the admissible endstate set of the cubic KdV-Burgers
equation together with its region map.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from . import config
from .errors import ConfigError, InconsistentTripleError, InvalidReactionError
from .nonlinearities import FluxSpec, ReactionSpec, ShockTriple, kdvb_h

logger = logging.getLogger(__name__)

RH_RTOL = 1e-9
ROOT_RTOL = 1e-9
MIN_REGION_RESOLUTION = 32


class ShockClass(str, Enum):
    CLASSICAL = "Classical"
    SLOW_UNDERCOMPRESSIVE = "SlowUndercompressive"
    FAST_UNDERCOMPRESSIVE = "FastUndercompressive"
    EXPANSIVE = "Expansive"


class ReactionClass(str, Enum):
    MONOSTABLE = "Monostable"
    BISTABLE = "Bistable"
    UNSTABLE = "Unstable"
    NEGATIVE_ON_INTERVAL = "NegativeOnInterval"
    REVERSED_MONOSTABLE = "ReversedMonostable"
    DEGENERATE = "Degenerate"


def _margin(margin: float | None) -> float:
    return config.STRICTNESS_MARGIN if margin is None else margin


# -------------------------------------------------------------------
# 1) Shock conditions
# -------------------------------------------------------------------


def rh_speed(f: FluxSpec, u_minus: float, u_plus: float) -> float:
    return ShockTriple.from_flux(f, u_minus, u_plus).c


def rh_residual(f: FluxSpec, t: ShockTriple) -> float:
    return float(f(t.u_plus) - f(t.u_minus) - t.c * (t.u_plus - t.u_minus))


def require_rankine_hugoniot(f: FluxSpec, t: ShockTriple) -> None:
    scale = 1.0 + abs(f(t.u_plus)) + abs(f(t.u_minus)) + abs(t.c * (t.u_plus - t.u_minus))
    residual = rh_residual(f, t)
    if abs(residual) > RH_RTOL * scale:
        raise InconsistentTripleError(
            f"Rankine-Hugoniot violated: f(u+) - f(u-) - c(u+ - u-) = {residual:.3e}",
            residual=residual,
            expected_c=rh_speed(f, t.u_minus, t.u_plus),
            **t.to_dict(),
        )


def lax_condition(f: FluxSpec, t: ShockTriple, margin: float | None = None) -> bool:
    """f'(u_+) < c < f'(u_-), each inequality by more than the margin."""
    eta = _margin(margin)
    return bool(f.derivative(t.u_plus) < t.c - eta and t.c + eta < f.derivative(t.u_minus))


@dataclass(frozen=True)
class OleinikReport:
    holds: bool
    margin: float
    worst_w: float

    def __bool__(self) -> bool:
        return self.holds


def oleinik_condition(
    f: FluxSpec,
    t: ShockTriple,
    n_samples: int | None = None,
    margin: float | None = None,
) -> OleinikReport:
    """
    (f(w) - f(u_-))/(w - u_-) ≥ c ≥ (f(w) - f(u_+))/(w - u_+) for all w between u_±,
    checked on a uniform sample; chord limits f'(u_∓) are used at the endpoints.
    """
    n_samples = n_samples or config.OLEINIK_SAMPLES
    if n_samples < 100:
        raise ConfigError(f"Oleinik check needs at least 100 samples, got {n_samples}")
    w = np.linspace(t.u_minus, t.u_plus, n_samples)
    with np.errstate(divide="ignore", invalid="ignore"):
        chord_minus = (f(w) - f(t.u_minus)) / (w - t.u_minus)
        chord_plus = (f(w) - f(t.u_plus)) / (w - t.u_plus)
    chord_minus[0] = f.derivative(t.u_minus)
    chord_plus[0] = t.c
    chord_minus[-1] = t.c
    chord_plus[-1] = f.derivative(t.u_plus)

    slack = np.minimum(chord_minus - t.c, t.c - chord_plus)
    worst = int(np.argmin(slack))
    return OleinikReport(
        holds=bool(slack[worst] >= -_margin(margin)),
        margin=float(slack[worst]),
        worst_w=float(w[worst]),
    )


def classify_shock(f: FluxSpec, t: ShockTriple, margin: float | None = None) -> ShockClass:
    """Label from the signs of f'(u_±) - c; ties count as not satisfying Lax."""
    require_rankine_hugoniot(f, t)
    eta = _margin(margin)
    lax_minus = f.derivative(t.u_minus) > t.c + eta
    lax_plus = f.derivative(t.u_plus) < t.c - eta
    if lax_minus and lax_plus:
        return ShockClass.CLASSICAL
    if lax_minus:
        return ShockClass.SLOW_UNDERCOMPRESSIVE
    if lax_plus:
        return ShockClass.FAST_UNDERCOMPRESSIVE
    return ShockClass.EXPANSIVE


def is_convex_on(f: FluxSpec, lo: float, hi: float, margin: float | None = None) -> bool:
    """f'' > 0 on [lo, hi] up to isolated zeros."""
    eta = _margin(margin)
    d2 = f.second_derivative(np.linspace(lo, hi, 257))
    return bool(np.all(d2 > -eta) and np.count_nonzero(d2 <= eta) <= 1)


# -------------------------------------------------------------------
# 2) Reaction classification
# -------------------------------------------------------------------


def interior_sign_pattern(r: ReactionSpec, lo: float, hi: float) -> str:
    """Signs of r on (lo, hi) read from lo to hi, e.g. "-+" for a bistable term."""
    tol = ROOT_RTOL * (hi - lo)
    cuts = [lo]
    for z in sorted(z.real for z in r.poly.roots() if abs(z.imag) < 1e-9):
        if lo + tol < z < hi - tol:
            cuts.append(z)
    cuts.append(hi)
    pattern = ""
    for left, right in zip(cuts[:-1], cuts[1:]):
        value = r(0.5 * (left + right))
        sign = "+" if value > 0 else "-" if value < 0 else "0"
        if not pattern or pattern[-1] != sign:
            pattern += sign
    return pattern


def _check_endstates(r: ReactionSpec, u_minus: float, u_plus: float) -> None:
    scale = 1.0 + float(np.max(np.abs(r.poly.coef))) * (1.0 + max(abs(u_minus), abs(u_plus))) ** r.poly.degree()
    for name, u in (("u_minus", u_minus), ("u_plus", u_plus)):
        if abs(r(u)) > ROOT_RTOL * scale:
            raise InvalidReactionError(
                f"reaction does not vanish at {name} = {u}: r = {r(u):.3e}", **{name: u, "r": float(r(u))}
            )


def _classify_generic(r: ReactionSpec, hi: float, lo: float, eta: float) -> ReactionClass:
    d_hi, d_lo = r.derivative(hi), r.derivative(lo)
    if abs(d_hi) <= eta or abs(d_lo) <= eta:
        return ReactionClass.DEGENERATE
    pattern = interior_sign_pattern(r, lo, hi)
    if d_hi < 0 < d_lo and pattern == "+":
        return ReactionClass.MONOSTABLE
    if d_hi < 0 and d_lo < 0 and pattern == "-+":
        return ReactionClass.BISTABLE
    if d_hi > 0 and d_lo > 0:
        return ReactionClass.UNSTABLE
    if d_hi > 0 > d_lo and pattern == "-":
        return ReactionClass.NEGATIVE_ON_INTERVAL
    return ReactionClass.DEGENERATE


def _classify_factorized(u_star: float, hi: float, lo: float, eta: float) -> ReactionClass:
    """Ordering of u_* = -u_- - u_+ against the endstates for r = -(u-u_-)(u-u_+)(u-u_*)."""
    if abs(u_star - lo) <= eta or abs(u_star - hi) <= eta:
        return ReactionClass.DEGENERATE
    if u_star < lo:
        return ReactionClass.MONOSTABLE
    if u_star < hi:
        return ReactionClass.BISTABLE
    return ReactionClass.NEGATIVE_ON_INTERVAL


def classify_reaction(
    r: ReactionSpec,
    u_minus: float,
    u_plus: float,
    margin: float | None = None,
    pathway: str = "auto",
) -> ReactionClass:
    """
    Label of r for the endstates u_±.

    For u_- < u_+ the roles of the endstates are exchanged (u_+ plays the
    upper state) and a monostable result is reported as ReversedMonostable.
    ``pathway`` selects the exact cubic factorization ("factorized"), the
    derivative/sign-pattern rule ("generic") or the first that applies ("auto").
    """
    if u_minus == u_plus:
        return ReactionClass.DEGENERATE
    _check_endstates(r, u_minus, u_plus)
    eta = _margin(margin)
    hi, lo = max(u_minus, u_plus), min(u_minus, u_plus)

    factorizable = r.kind == "cubic_from_shock" and r.roots is not None and np.allclose(
        sorted(r.roots[:2]), [lo, hi]
    )
    if pathway == "factorized" and not factorizable:
        raise ConfigError("factorized pathway needs a cubic_from_shock reaction for these endstates")
    if pathway == "factorized" or (pathway == "auto" and factorizable):
        label = _classify_factorized(-u_minus - u_plus, hi, lo, eta)
    else:
        label = _classify_generic(r, hi, lo, eta)

    if u_minus < u_plus and label is ReactionClass.MONOSTABLE:
        return ReactionClass.REVERSED_MONOSTABLE
    return label


def potential_gap(r: ReactionSpec, u_minus: float, u_plus: float) -> float:
    """∫_{u_-}^{u_+} r(υ) dυ = R(u_+) - R(u_-), exact for polynomials."""
    R = r.poly.integ()
    return float(R(u_plus) - R(u_minus))


def speed_sign_admissible(
    r: ReactionSpec,
    u_minus: float,
    u_plus: float,
    sign: int,
    tol: float = 1e-12,
) -> bool:
    """Necessary condition sgn(c) = -sgn(∫ r) for a front with speed of the given sign."""
    gap = potential_gap(r, u_minus, u_plus)
    if sign > 0:
        return gap < -tol
    if sign < 0:
        return gap > tol
    return abs(gap) <= tol


# -------------------------------------------------------------------
# 3) Cubic KdV-Burgers : admissible endstates
# -------------------------------------------------------------------


def jms_beta(eps: float, delta: float) -> float:
    if eps <= 0 or delta <= 0:
        raise ConfigError("the admissible-set formula needs eps > 0 and delta > 0", eps=eps, delta=delta)
    return math.sqrt(2.0) / 3.0 * eps / math.sqrt(delta)


@dataclass(frozen=True)
class AdmissibleSet:
    """Union of half-open intervals [lo, hi) and isolated points."""

    u_minus: float
    beta: float
    intervals: tuple[tuple[float, float], ...]
    isolated: tuple[float, ...]

    def contains(self, u: float, atol: float = 1e-12) -> bool:
        if any(abs(u - p) <= atol for p in self.isolated):
            return True
        return any(lo - atol <= u < hi for lo, hi in self.intervals)

    def to_dict(self) -> dict[str, Any]:
        return {
            "u_minus": self.u_minus,
            "beta": self.beta,
            "intervals": [{"lo": lo, "hi": hi, "closed_lo": True, "closed_hi": False} for lo, hi in self.intervals],
            "isolated": list(self.isolated),
        }


def jms_admissible_set(u_minus: float, eps: float, delta: float) -> AdmissibleSet:
    """
    S(u_-) = [-u_-/2, u_-)             if u_- ≤ 2β,
             {-u_- + β} ∪ [-β, u_-)    otherwise,      β = (√2/3) ε/√δ.
    """
    beta = jms_beta(eps, delta)
    if u_minus <= 0:
        raise ConfigError(f"the admissible set is stated for u_minus > 0, got {u_minus}", u_minus=u_minus)
    if u_minus <= 2.0 * beta:
        return AdmissibleSet(u_minus, beta, ((-0.5 * u_minus, u_minus),), ())
    return AdmissibleSet(u_minus, beta, ((-beta, u_minus),), (-u_minus + beta,))


def region_point(
    f: FluxSpec,
    u_minus: float,
    u_plus: float,
    eps: float,
    delta: float,
    line_tol: float = 1e-9,
) -> dict[str, Any]:
    """All labels of one endstate pair of the KdV-Burgers region map."""
    beta = jms_beta(eps, delta)
    row: dict[str, Any] = {"u_minus": u_minus, "u_plus": u_plus, "u_star": -u_minus - u_plus}
    if math.isclose(u_minus, u_plus, rel_tol=0.0, abs_tol=1e-12):
        row.update(
            reaction_class=ReactionClass.DEGENERATE.value,
            shock_class=None,
            admissible=False,
            on_undercompressive_line=False,
        )
        return row

    triple = ShockTriple.from_flux(f, u_minus, u_plus)
    if f.kind == "cubic":
        r = ReactionSpec.cubic_from_shock(u_minus, u_plus)
    else:
        r = ReactionSpec(-kdvb_h(f, triple))
    on_line = bool(u_minus > 2.0 * beta and abs(u_plus - (-u_minus + beta)) <= line_tol)
    admissible = bool(u_minus > 0 and jms_admissible_set(u_minus, eps, delta).contains(u_plus, atol=line_tol))
    row.update(
        reaction_class=classify_reaction(r, u_minus, u_plus).value,
        shock_class=classify_shock(f, triple).value,
        admissible=admissible or on_line,
        on_undercompressive_line=on_line,
    )
    return row


def _region_row(f, u_minus, u_plus_values, eps, delta, line_tol):
    return [region_point(f, u_minus, float(up), eps, delta, line_tol) for up in u_plus_values]


def region_map(
    f: FluxSpec,
    u_minus_range: tuple[float, float],
    u_plus_range: tuple[float, float],
    eps: float,
    delta: float,
    resolution: int,
    n_jobs: int | None = None,
    show_progress: bool | None = None,
) -> pd.DataFrame:
    """
    Labels on a resolution × resolution grid of endstates.

    A grid point counts as on the undercompressive half-line u_+ = -u_- + β
    when it lies within half a u_+ cell of it.
    """
    if resolution < MIN_REGION_RESOLUTION:
        raise ConfigError(
            f"region map resolution must be at least {MIN_REGION_RESOLUTION}, got {resolution}",
            resolution=resolution,
        )
    jms_beta(eps, delta)
    u_minus_values = np.linspace(*u_minus_range, resolution)
    u_plus_values = np.linspace(*u_plus_range, resolution)
    line_tol = 0.5 * abs(u_plus_values[1] - u_plus_values[0])
    show = config.SHOW_PROGRESS if show_progress is None else show_progress

    rows = Parallel(n_jobs=n_jobs or config.THREADS)(
        delayed(_region_row)(f, float(um), u_plus_values, eps, delta, line_tol)
        for um in tqdm(u_minus_values, desc="Region map", disable=not show)
    )
    df = pd.DataFrame([point for row in rows for point in row])
    logger.info("region map: %d points, %d admissible", len(df), int(df["admissible"].sum()))
    return df
