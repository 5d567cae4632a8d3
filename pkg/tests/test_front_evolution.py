from __future__ import annotations

import math

import numpy as np
import pytest

from traveling_wave_lab.errors import (
    ConfigError,
    InstabilityError,
    NotConvergedError,
    NoTravelingWaveError,
    UnsupportedParameterError,
)
from traveling_wave_lab.front_evolution import (
    EvolutionSpec,
    Trajectory,
    _extrapolated_endstate,
    alpha_continuation,
    caputo_energy,
    evolve,
    extract_profile,
    fkdvb_endstate_scan,
    fowler_experiment,
    level_crossings,
    march_fractional_twe,
    necessary_condition_integrals,
    solve_convolution_rd_tw,
    solve_rd_riesz_feller_tw,
    tail_coefficient,
    track_front,
)
from traveling_wave_lab.grids import KernelSpec, ProfileGrid
from traveling_wave_lab.levy_ops import RieszFellerParams
from traveling_wave_lab.nonlinearities import FluxSpec, ReactionSpec, ShockTriple, kdvb_h
from traveling_wave_lab.operators import RieszFellerOperator

BISTABLE_SPEED = 0.4 / math.sqrt(2.0)
HEAT = RieszFellerOperator(RieszFellerParams(2.0, 0.0))


def _moving_tanh(shifts: list[float], h: float = 0.1) -> Trajectory:
    """Snapshots of a decreasing tanh front displaced by the given shifts at t = 0, 1, 2, ..."""
    snaps = tuple(
        ProfileGrid.from_function(lambda x, s=s: 0.5 - 0.5 * np.tanh(x - s - 0.03), -20.0, 20.0, 401, 1.0, 0.0)
        for s in shifts
    )
    return Trajectory(np.arange(len(shifts), dtype=float), snaps, dt=1.0, steps=len(shifts) - 1)


# ---------- set-up ----------


@pytest.mark.parametrize(
    "kwargs",
    [{"L": 0.0}, {"n": 32}, {"dt": 0.0}, {"T": -1.0}, {"snapshots": 1}],
)
def test_evolution_spec_validation(kwargs: dict) -> None:
    with pytest.raises(ConfigError):
        EvolutionSpec(HEAT, 1.0, 0.0, **kwargs)


def test_default_dt_respects_every_guard(bistable: ReactionSpec) -> None:
    spec = EvolutionSpec(HEAT, 1.0, 0.0, reaction=bistable, L=50.0, n=2048)
    assert spec.default_dt() == pytest.approx(0.25 * spec.h**2)
    coarse = EvolutionSpec(HEAT, 1.0, 0.0, reaction=bistable, L=50.0, n=64)
    assert coarse.default_dt() == pytest.approx(0.1 / bistable.lipschitz(0.0, 1.0))


def test_level_crossings() -> None:
    ramp = ProfileGrid.from_function(lambda x: -x, -1.0, 1.0, 21)
    np.testing.assert_allclose(level_crossings(ramp, 0.25), [-0.25])
    assert level_crossings(ramp, 5.0).size == 0


# ---------- tracking ----------


def test_track_front_recovers_an_exact_translation() -> None:
    # c·Δt = 0.5 is five cells, so interpolation errors repeat exactly
    traj = _moving_tanh([0.5 * t for t in range(11)])
    trace = track_front(traj)
    assert trace.slope == pytest.approx(0.5, abs=1e-10)
    assert trace.r2 == pytest.approx(1.0)
    assert trace.converged
    assert not trace.ambiguous

    profile = extract_profile(traj, trace)
    assert profile.evaluate(np.array([0.0]))[0] == pytest.approx(0.5, abs=1e-3)
    assert list(trace.to_frame().columns) == ["t", "position"]


def test_wandering_front_does_not_converge() -> None:
    traj = _moving_tanh([0.0, 0.3, -0.2, 0.5, -0.4, 0.6, -0.1, 0.2, -0.5, 0.4, 0.0])
    trace = track_front(traj)
    assert not trace.converged
    with pytest.raises(NotConvergedError):
        extract_profile(traj, trace)


def test_lost_front() -> None:
    flat = ProfileGrid(-1.0, 0.1, np.ones(21), 1.0, 0.0)
    traj = Trajectory(np.arange(4, dtype=float), (flat,) * 4, dt=1.0, steps=3)
    with pytest.raises(NotConvergedError):
        track_front(traj)


# ---------- evolution ----------


def test_constant_state_is_stationary() -> None:
    spec = EvolutionSpec(HEAT, 0.3, 0.3, L=10.0, n=128, dt=0.01, T=0.1, snapshots=3)
    traj = evolve(spec, show_progress=False)
    np.testing.assert_allclose(traj.final.values, 0.3, atol=1e-14)
    assert len(traj.snapshots) == 3
    assert set(traj.frame().columns) == {"t", "xi", "u"}


def test_oversized_step_is_reported(bistable: ReactionSpec) -> None:
    spec = EvolutionSpec(HEAT, 1.0, 0.0, reaction=bistable, L=20.0, n=256, dt=50.0, T=500.0)
    with pytest.raises(InstabilityError) as info:
        evolve(spec, show_progress=False)
    assert info.value.exit_code == 5
    assert info.value.reason["suggested_dt"] == pytest.approx(25.0)


def test_riesz_feller_front_preconditions(bistable: ReactionSpec) -> None:
    with pytest.raises(UnsupportedParameterError):
        solve_rd_riesz_feller_tw(RieszFellerParams(0.8, 0.0), bistable, 1.0, 0.0)
    with pytest.raises(ConfigError):
        solve_rd_riesz_feller_tw(RieszFellerParams(1.5, 0.0), ReactionSpec.logistic(), 1.0, 0.0)
    with pytest.raises(NoTravelingWaveError) as info:
        solve_rd_riesz_feller_tw(RieszFellerParams(1.5, 0.0), ReactionSpec.polynomial([0.0, -1.0, 1.0]), 1.0, 0.0)
    assert info.value.exit_code == 4
    assert info.value.reason["reaction_class"] == "NegativeOnInterval"


def test_convolution_front_needs_a_front_forming_reaction() -> None:
    with pytest.raises(NoTravelingWaveError):
        solve_convolution_rd_tw(KernelSpec.hat(1.0, 0.05), ReactionSpec.from_roots([0.0, 1.0, 0.5]), 1.0, 0.0)


@pytest.mark.slow
def test_local_bistable_front_by_evolution(bistable: ReactionSpec) -> None:
    res = solve_rd_riesz_feller_tw(RieszFellerParams(2.0, 0.0), bistable, 1.0, 0.0, L=50.0, n=1024, dt=0.05, T=60.0)
    assert res.speed == pytest.approx(BISTABLE_SPEED, abs=1e-2)
    assert res.monotone
    assert res.residual_sup <= 1e-3
    assert res.diagnostics["r2"] >= 0.999


@pytest.mark.slow
@pytest.mark.parametrize("theta", [0.0, 0.4])
def test_riesz_feller_bistable_front(bistable: ReactionSpec, theta: float) -> None:
    res = solve_rd_riesz_feller_tw(
        RieszFellerParams(1.5, theta), bistable, 1.0, 0.0, L=50.0, n=1024, dt=0.05, T=60.0
    )
    assert res.speed > 0.0
    assert res.monotone
    assert res.residual_sup <= 1e-2


@pytest.mark.slow
def test_convolution_bistable_front(bistable: ReactionSpec) -> None:
    J = KernelSpec.hat(1.0, 0.05)
    res = solve_convolution_rd_tw(J, bistable, 1.0, 0.0, L=50.0, n=1024, dt=0.05, T=60.0)
    assert res.speed > 0.0
    assert res.monotone
    assert not res.diagnostics["heavy_tailed"]


# ---------- fractional KdV-Burgers ----------


def test_anti_lax_burgers_triple_is_rejected(burgers: FluxSpec) -> None:
    with pytest.raises(NoTravelingWaveError) as info:
        march_fractional_twe(burgers, 1.0, 0.5, ShockTriple.from_flux(burgers, 0.0, 1.0))
    assert info.value.condition == "Lax entropy condition"


def test_marching_needs_a_valid_order(burgers: FluxSpec) -> None:
    with pytest.raises(UnsupportedParameterError):
        march_fractional_twe(burgers, 1.0, 1.0, ShockTriple.from_flux(burgers, 1.0, 0.0))
    with pytest.raises(ConfigError):
        march_fractional_twe(burgers, 1.0, 0.5, ShockTriple.from_flux(burgers, 1.0, 0.0), h=10.0)


def test_burgers_tail_coefficient() -> None:
    # h(u) = u(u-1)/2 for Burgers from 1 to 0, h'(0) = -1/2
    assert tail_coefficient(1.0, 0.5, 1.0, 0.0, -0.5) == pytest.approx(2.0 / math.sqrt(math.pi))
    assert tail_coefficient(1.0, 0.5, 1.0, 0.0, 0.0) is None


@pytest.mark.parametrize("alpha", [0.5, 0.9])
def test_endstate_extrapolation_from_an_algebraic_tail(alpha: float) -> None:
    xi = np.linspace(1.0, 400.0, 4000)
    C = 2.0 / math.sqrt(math.pi)
    u = 0.2 + C * xi ** (-alpha) + 0.3 * xi ** (-2.0 * alpha)
    u_inf, r2 = _extrapolated_endstate(xi, u, alpha, leading=C)
    assert u_inf == pytest.approx(0.2, abs=1e-10)
    assert r2 == pytest.approx(1.0)

    # u(ξ_max) alone is far from the endstate
    assert u[-1] - 0.2 > 1e-3


def test_necessary_condition_integrals(burgers: FluxSpec) -> None:
    triple = ShockTriple.from_flux(burgers, 1.0, 0.0)
    profile = ProfileGrid.from_function(lambda x: 0.5 - 0.5 * np.tanh(x / 4.0), -60.0, 60.0, 2401, 1.0, 0.0)
    total, running_min = necessary_condition_integrals(profile, 0.5, kdvb_h(burgers, triple))
    assert total == pytest.approx(1.0 / 12.0)
    assert running_min >= -1e-12
    assert caputo_energy(profile, 0.5) > 0.0


@pytest.mark.slow
def test_fractional_burgers_front(burgers: FluxSpec) -> None:
    res = march_fractional_twe(burgers, 1.0, 0.5, ShockTriple.from_flux(burgers, 1.0, 0.0))
    d = res.diagnostics
    assert res.monotone
    assert not res.conjectural
    assert d["endstate_error"] <= 1e-3
    assert d["endstate_refinement"] <= 1e-3
    assert res.residual_sup <= 1e-3
    assert min(d["nc_global"], d["nc_running_min"]) >= -1e-8
    assert res.profile.evaluate(np.array([0.0]))[0] == pytest.approx(0.5, abs=1e-6)


@pytest.mark.slow
def test_alpha_continuation_approaches_the_viscous_shock(burgers: FluxSpec) -> None:
    df = alpha_continuation(burgers, 1.0, ShockTriple.from_flux(burgers, 1.0, 0.0), alphas=(0.5, 0.9), xi_max=100.0)
    assert list(df["alpha"]) == [0.5, 0.9]
    assert df["distance_to_viscous"].iloc[1] < df["distance_to_viscous"].iloc[0]


@pytest.mark.slow
def test_fowler_experiment_reports_without_claiming(burgers: FluxSpec) -> None:
    triple = ShockTriple.from_flux(burgers, 1.0, 0.0)
    report = fowler_experiment(burgers, 1.0, 1.0, 0.5, triple, L=50.0, n=512, dt=0.01, T=5.0)
    d = report.to_dict()
    assert d["conjectural"] is True
    assert d["comparison_principle"] is False
    assert d["unstable_band"] == pytest.approx(0.5)
    assert d["max_growth"] > 0.0
    assert d["nc_lhs"] == pytest.approx(1.0 / 12.0)
    assert report.trajectory is not None


def test_endstate_scan_keeps_the_violated_condition(cubic: FluxSpec) -> None:
    df = fkdvb_endstate_scan(cubic, 1.0, 0.5, 1.0, [-0.8, -3.0, 1.0], show_progress=False)
    assert not df["front"].any()
    assert list(df["condition"][:2]) == ["-h monostable between u_+ and u_-"] * 2
    assert df["condition"].iloc[2] == "DegenerateInputError"


@pytest.mark.slow
def test_endstate_scan_finds_the_lax_front(cubic: FluxSpec) -> None:
    df = fkdvb_endstate_scan(cubic, 1.0, 0.5, 1.0, [0.0], xi_max=100.0, show_progress=False)
    assert df["front"].iloc[0]
    assert df["speed"].iloc[0] == pytest.approx(1.0)
