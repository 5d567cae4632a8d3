from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import erfc

from traveling_wave_lab.errors import ConfigError, ResolutionError, UnsupportedParameterError
from traveling_wave_lab.grids import ProfileGrid
from traveling_wave_lab.heat_kernel import (
    check_scaling,
    check_semigroup,
    compute_kernel,
    evolve_linear,
    gaussian_density,
    half_line_leakage,
    kernel_property_report,
    kernel_property_sweep,
    max_resolved_L,
)
from traveling_wave_lab.levy_ops import RieszFellerParams


def test_gaussian_member() -> None:
    sample = compute_kernel(RieszFellerParams(2.0, 0.0), 1.0)
    assert np.max(np.abs(sample.density - gaussian_density(sample.x, 1.0))) <= 1e-8
    assert sample.mass == pytest.approx(1.0, abs=1e-10)
    df = sample.to_frame()
    assert list(df.columns) == ["x", "density"]
    assert len(df) == sample.n


@pytest.mark.parametrize("a, theta", [(1.5, 0.0), (1.5, 0.3), (1.0, 0.0), (0.8, 0.4), (0.5, -0.5)])
def test_mass_and_positivity(a: float, theta: float) -> None:
    sample = compute_kernel(RieszFellerParams(a, theta), 0.7)
    assert abs(sample.mass - 1.0) <= 1e-6
    assert np.min(sample.density) >= -1e-8


def test_cauchy_kernel() -> None:
    sample = compute_kernel(RieszFellerParams(1.0, 0.0), 1.0)
    cauchy = 1.0 / (np.pi * (1.0 + sample.x**2))
    inner = np.abs(sample.x) <= 10.0
    assert np.max(np.abs(sample.density[inner] - cauchy[inner])) <= 1e-6


def test_scaling_and_semigroup() -> None:
    p = RieszFellerParams(1.5, 0.3)
    assert check_scaling(p, 0.7) <= 1e-4
    assert check_semigroup(p, 0.35, 0.35) <= 1e-5


def test_scaling_check_flags_a_narrow_window() -> None:
    p = RieszFellerParams(2.0, 0.0)
    assert check_scaling(p, 0.7, n=4096) <= 1e-8
    # the nearest periodic image sits 1.5 L away from the edge of the compared region
    narrow = 4.0 * math.sqrt(0.7) * 1.001
    assert check_scaling(p, 0.7, n=4096, L=narrow) >= 1e-5


def test_extremal_kernel_on_a_tight_window() -> None:
    p = RieszFellerParams(0.5, -0.5)
    sample = compute_kernel(p, 0.7, n=4096)
    assert sample.L < 2.5
    assert abs(sample.mass - 1.0) <= 1e-6
    assert np.min(sample.density) >= -1e-8

    report = kernel_property_report(p, 0.7, n=4096)
    assert report["mass_error"] <= 1e-6
    assert report["semigroup_deviation"] <= 1e-5
    assert report["scaling_deviation"] <= 1e-4


def test_extremal_kernel_lives_on_a_half_line() -> None:
    sample = compute_kernel(RieszFellerParams(0.5, -0.5), 0.7)
    assert half_line_leakage(sample) <= 1e-6
    with pytest.raises(UnsupportedParameterError):
        half_line_leakage(compute_kernel(RieszFellerParams(0.5, 0.0), 0.7))


def test_property_report_fields() -> None:
    report = kernel_property_report(RieszFellerParams(2.0, 0.0), 0.7, n=4096)
    assert report["gaussian_deviation"] <= 1e-8
    assert report["half_line_leakage"] is None
    assert report["semigroup_s"] == pytest.approx(0.35)

    extremal = kernel_property_report(RieszFellerParams(0.5, -0.5), 0.7)
    assert extremal["half_line_leakage"] is not None
    assert extremal["gaussian_deviation"] is None


def test_property_sweep() -> None:
    df = kernel_property_sweep([(2.0, 0.0), (1.5, 0.0)], t=0.7, n=4096, n_jobs=1, show_progress=False)
    assert len(df) == 2
    assert {"a", "theta", "mass_error", "scaling_deviation", "semigroup_deviation"} <= set(df.columns)
    assert (df["mass_error"] <= 1e-6).all()


def test_input_validation() -> None:
    with pytest.raises(UnsupportedParameterError):
        compute_kernel(RieszFellerParams(1.0, 1.0), 1.0)
    with pytest.raises(ConfigError):
        compute_kernel(RieszFellerParams(1.5, 0.0), 0.0)
    with pytest.raises(ConfigError):
        compute_kernel(RieszFellerParams(1.5, 0.0), 1.0, n=1000)
    with pytest.raises(ConfigError):
        compute_kernel(RieszFellerParams(1.5, 0.0), 1.0, n=32)


def test_under_resolved_window_suggests_a_width() -> None:
    p = RieszFellerParams(1.5, 0.0)
    L_max = max_resolved_L(p, 0.01, 256)
    with pytest.raises(ResolutionError) as info:
        compute_kernel(p, 0.01, L=10.0 * L_max, n=256)
    assert info.value.suggested_L == pytest.approx(L_max)
    assert info.value.exit_code == 2


def test_linear_evolution_of_a_step_is_erfc() -> None:
    u0 = ProfileGrid.from_function(lambda x: np.where(x < -1e-9, 1.0, 0.0), -10.0, 10.0, 2001, left_state=1.0, right_state=0.0)
    out = evolve_linear(RieszFellerParams(2.0, 0.0), u0, 1.0)
    # the staircase jumps at the midpoint between -h and 0
    exact = 0.5 * erfc((u0.xi + 0.5 * u0.h) / 2.0)
    np.testing.assert_allclose(out.values, exact, atol=1e-5)
    assert (out.left_state, out.right_state) == (1.0, 0.0)


def test_linear_evolution_keeps_constants_and_order() -> None:
    p = RieszFellerParams(1.5, 0.2)
    flat = ProfileGrid(-5.0, 0.05, np.full(201, 0.4), 0.4, 0.4)
    np.testing.assert_allclose(evolve_linear(p, flat, 0.5).values, 0.4, atol=1e-12)

    ramp = ProfileGrid.tanh_ramp(1.0, 0.0, 20.0, 801)
    out = evolve_linear(p, ramp, 0.5).values
    assert np.all(np.diff(out) <= 1e-8)
    assert out.min() >= -1e-8 and out.max() <= 1.0 + 1e-8
