from __future__ import annotations

import math

import numpy as np
import pytest

from traveling_wave_lab.errors import ConfigError, NoTravelingWaveError
from traveling_wave_lab.grids import ProfileGrid
from traveling_wave_lab.nonlinearities import FluxSpec, ReactionSpec, ShockTriple
from traveling_wave_lab.phase_plane import (
    StationaryType,
    TailGeometry,
    eigen_report,
    is_monotone,
    kdvb_eigen_report,
    kdvb_reaction,
    kdvb_tail_transition,
    min_speed_estimate,
    rd_residual,
    shoot_bistable,
    shoot_monostable,
    solve_kdvb_tw,
    solve_rd_tw,
    tail_geometry,
    twe_vector_field,
)
from traveling_wave_lab.shock_classify import jms_beta

BISTABLE_SPEED = 0.4 / math.sqrt(2.0)


def _bistable_exact(xi: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(xi / math.sqrt(2.0)))


# ---------- stationary states ----------


@pytest.mark.parametrize(
    "rprime, c, expected",
    [
        (-1.0, 0.0, StationaryType.SADDLE),
        (1.0, 3.0, StationaryType.STABLE_NODE),
        (1.0, -3.0, StationaryType.UNSTABLE_NODE),
        (1.0, 1.0, StationaryType.STABLE_SPIRAL),
        (1.0, 0.0, StationaryType.NON_HYPERBOLIC),
    ],
)
def test_eigen_report(rprime: float, c: float, expected: StationaryType) -> None:
    report = eigen_report(rprime, 1.0, c)
    assert report.type is expected
    assert report.trace.real == pytest.approx(-c)
    assert report.determinant.real == pytest.approx(rprime)


def test_eigen_report_needs_positive_diffusion() -> None:
    with pytest.raises(ConfigError):
        eigen_report(1.0, 0.0, 1.0)


def test_kdvb_eigen_report() -> None:
    # δλ² + ελ - h' = 0 with h' = 2, ε = δ = 1 : λ = 1, -2
    report = kdvb_eigen_report(2.0, 1.0, 1.0)
    assert sorted(z.real for z in report.eigenvalues) == pytest.approx([-2.0, 1.0])
    assert report.type is StationaryType.SADDLE
    with pytest.raises(ConfigError):
        kdvb_eigen_report(2.0, 0.0, 1.0)


def test_tail_geometry_and_vector_field(bistable: ReactionSpec) -> None:
    assert tail_geometry(1.0, 2.0, 1.0) is TailGeometry.MONOTONE
    assert tail_geometry(1.0, 1.9, 1.0) is TailGeometry.OSCILLATORY
    assert twe_vector_field(bistable, 1.0, 0.5, (0.5, 0.2)) == pytest.approx((0.2, -bistable(0.5) - 0.1))


# ---------- bistable ----------


def test_bistable_front_matches_closed_form(bistable: ReactionSpec) -> None:
    res = shoot_bistable(bistable, 1.0, 1.0, 0.0)
    assert res.speed == pytest.approx(BISTABLE_SPEED, abs=1e-4)
    assert np.max(np.abs(res.profile.values - _bistable_exact(res.profile.xi))) <= 1e-4
    assert res.monotone
    assert res.residual_sup <= 1e-4
    assert res.diagnostics["potential_gap"] < 0
    frame = res.profile_frame()
    assert list(frame.columns) == ["xi", "u", "v"]
    assert (frame["v"] <= 1e-4).all()


def test_bistable_increasing_front_is_the_reflection(bistable: ReactionSpec) -> None:
    res = shoot_bistable(bistable, 1.0, 0.0, 1.0)
    assert res.speed == pytest.approx(-BISTABLE_SPEED, abs=1e-4)
    assert (res.profile.left_state, res.profile.right_state) == (0.0, 1.0)
    assert res.diagnostics["reflected"]


def test_bistable_needs_a_bistable_reaction() -> None:
    with pytest.raises(ConfigError):
        shoot_bistable(ReactionSpec.logistic(), 1.0, 1.0, 0.0)


def test_bistable_speed_is_unique(bistable: ReactionSpec) -> None:
    res = solve_rd_tw(bistable, 1.0, BISTABLE_SPEED, 1.0, 0.0)
    assert res.speed == pytest.approx(BISTABLE_SPEED, abs=1e-4)
    with pytest.raises(NoTravelingWaveError) as info:
        solve_rd_tw(bistable, 1.0, 0.5, 1.0, 0.0)
    assert info.value.reason["unique_speed"] == pytest.approx(BISTABLE_SPEED, abs=1e-4)


# ---------- monostable ----------


def test_fast_monostable_front_is_monotone() -> None:
    res = shoot_monostable(ReactionSpec.logistic(), 1.0, 3.0, 1.0, 0.0)
    assert res.monotone
    assert res.tail is TailGeometry.MONOTONE
    assert res.speed == 3.0
    assert res.profile.values[0] == pytest.approx(1.0, abs=1e-6)
    assert res.profile.values[-1] == pytest.approx(0.0, abs=1e-6)


def test_slow_monostable_front_oscillates() -> None:
    res = shoot_monostable(ReactionSpec.logistic(), 1.0, 1.0, 1.0, 0.0)
    assert res.tail is TailGeometry.OSCILLATORY
    assert not res.monotone
    assert not res.diagnostics["winding_monotone"]


def test_monostable_rejects_non_positive_speed() -> None:
    with pytest.raises(NoTravelingWaveError):
        shoot_monostable(ReactionSpec.logistic(), 1.0, -1.0, 1.0, 0.0)


def test_negative_speed_reverses_the_front() -> None:
    res = solve_rd_tw(ReactionSpec.logistic(), 1.0, -2.5, 0.0, 1.0)
    assert res.speed == pytest.approx(-2.5)
    assert (res.profile.left_state, res.profile.right_state) == (0.0, 1.0)
    assert is_monotone(res.profile)


@pytest.mark.parametrize(
    "r",
    [ReactionSpec.logistic().negated(), ReactionSpec.from_roots([0.0, 1.0, 0.5])],
    ids=["negative-on-interval", "unstable"],
)
def test_no_front_for_these_reactions(r: ReactionSpec) -> None:
    with pytest.raises(NoTravelingWaveError) as info:
        solve_rd_tw(r, 1.0, 1.0, 1.0, 0.0)
    assert info.value.exit_code == 4
    assert info.value.condition


@pytest.mark.slow
def test_minimal_speed_of_the_logistic_front() -> None:
    est = min_speed_estimate(ReactionSpec.logistic(), 1.0, 1.0, 0.0, tol=1e-3)
    assert est.concave
    assert est.closed_form == pytest.approx(2.0)
    assert est.shooting == pytest.approx(2.0, abs=1e-2)


def test_residual_and_monotonicity_helpers(bistable: ReactionSpec) -> None:
    exact = ProfileGrid.from_function(_bistable_exact, -30.0, 30.0, 6001, left_state=1.0, right_state=0.0)
    assert rd_residual(exact, bistable, 1.0, BISTABLE_SPEED) <= 1e-7
    assert is_monotone(exact)
    bump = exact.with_values(exact.values + 0.01 * np.exp(-((exact.xi - 10.0) ** 2)))
    assert not is_monotone(bump)


# ---------- KdV-Burgers ----------


def test_burgers_viscous_shock(burgers: FluxSpec) -> None:
    triple = ShockTriple.from_flux(burgers, 1.0, 0.0)
    res = solve_kdvb_tw(burgers, 1.0, 0.0, triple)
    exact = 0.5 - 0.5 * np.tanh(0.25 * res.profile.xi)
    assert np.max(np.abs(res.profile.values - exact)) <= 1e-6
    assert res.residual_sup <= 1e-8
    assert res.speed == pytest.approx(0.5)
    assert res.diagnostics["mapping"].startswith("first-order")


def test_burgers_anti_lax_triple_has_no_front(burgers: FluxSpec) -> None:
    with pytest.raises(NoTravelingWaveError) as info:
        solve_kdvb_tw(burgers, 1.0, 0.0, ShockTriple.from_flux(burgers, 0.0, 1.0))
    assert info.value.reason["delta"] == 0.0


def test_cubic_undercompressive_kink(cubic: FluxSpec) -> None:
    beta = jms_beta(1.0, 1.0)
    u_minus = 1.2
    u_plus = -u_minus + beta
    triple = ShockTriple.from_flux(cubic, u_minus, u_plus)
    m, n = 0.5 * (u_minus + u_plus), 0.5 * (u_minus - u_plus)
    res = solve_kdvb_tw(cubic, 1.0, 1.0, triple)
    exact = m - n * np.tanh(n / math.sqrt(2.0) * res.profile.xi)
    assert np.max(np.abs(res.profile.values - exact)) <= 1e-6
    assert res.speed == pytest.approx(triple.c)
    assert res.diagnostics["reaction_class"] == "Bistable"


def test_kdvb_reaction_is_minus_h(burgers: FluxSpec, cubic: FluxSpec) -> None:
    r = kdvb_reaction(burgers, ShockTriple.from_flux(burgers, 1.0, 0.0))
    assert r(0.5) == pytest.approx(0.125)
    assert kdvb_reaction(cubic, ShockTriple.from_flux(cubic, 1.0, -0.4)).kind == "cubic_from_shock"


def test_kdvb_needs_viscosity(burgers: FluxSpec) -> None:
    with pytest.raises(ConfigError):
        solve_kdvb_tw(burgers, 0.0, 1.0, ShockTriple.from_flux(burgers, 1.0, 0.0))


@pytest.mark.slow
def test_oscillation_threshold(burgers: FluxSpec) -> None:
    shooting, predicted = kdvb_tail_transition(burgers, 1.0, ShockTriple.from_flux(burgers, 1.0, 0.0), tol=1e-3)
    assert predicted == pytest.approx(math.sqrt(2.0))
    assert shooting == pytest.approx(predicted, abs=1e-2)
