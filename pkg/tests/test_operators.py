from __future__ import annotations

import math

import numpy as np
import pytest

from traveling_wave_lab.errors import ConfigError, UnsupportedParameterError
from traveling_wave_lab.grids import KernelSpec, ProfileGrid
from traveling_wave_lab.levy_ops import RieszFellerParams, apply_riesz_feller, rf_symbol
from traveling_wave_lab.operators import (
    CaputoPlusLaplacian,
    ConvolutionOperator,
    FowlerOperator,
    RieszFellerOperator,
    fowler_linear_growth,
    fowler_unstable_band,
)

K = np.linspace(-20.0, 20.0, 401)


def test_riesz_feller_operator(gaussian: ProfileGrid) -> None:
    op = RieszFellerOperator(RieszFellerParams(1.5, 0.3), sigma=2.0)
    np.testing.assert_allclose(op.symbol(K), 2.0 * rf_symbol(op.params, -K))
    assert np.all(op.symbol(K).real <= 0.0)
    np.testing.assert_allclose(op.apply(gaussian).values, 2.0 * apply_riesz_feller(op.params, gaussian).values)
    assert op.dt_limit(0.1) == pytest.approx(0.25 * 0.1**1.5 / 2.0)
    assert op.to_dict()["a"] == 1.5

    heat = RieszFellerOperator(RieszFellerParams(2.0, 0.0))
    np.testing.assert_allclose(heat.symbol(K), -(K**2))

    with pytest.raises(ConfigError):
        RieszFellerOperator(RieszFellerParams(1.5, 0.0), sigma=0.0)


def test_convolution_symbol_matches_real_space_action(gaussian: ProfileGrid) -> None:
    op = ConvolutionOperator(KernelSpec.hat(1.0, gaussian.h))
    k = 2.0 * np.pi * np.fft.fftfreq(gaussian.n, d=gaussian.h)
    spectral = np.fft.ifft(op.symbol(k) * np.fft.fft(gaussian.values)).real
    np.testing.assert_allclose(spectral, op.apply(gaussian).values, atol=1e-12)
    assert op.symbol(np.array([0.0]))[0] == pytest.approx(0.0, abs=1e-14)
    assert np.all(op.symbol(K) <= 1e-14)
    assert not op.to_dict()["heavy_tailed"]


def test_heat_stencil_is_the_three_point_laplacian() -> None:
    heat = RieszFellerOperator(RieszFellerParams(2.0, 0.0))
    n, h = 64, 0.1
    stencil = heat.stencil(n, h)
    assert stencil.size == 2 * n - 1
    np.testing.assert_allclose(stencil[n - 2 : n + 1], np.array([1.0, -2.0, 1.0]) / h**2)
    assert np.count_nonzero(stencil) == 3
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=h)
    np.testing.assert_allclose(heat.discrete_symbol(n, h), -4.0 / h**2 * np.sin(0.5 * k * h) ** 2, atol=1e-9)


@pytest.mark.parametrize("theta", [0.0, 0.3])
def test_stencil_reproduces_the_real_space_action(theta: float) -> None:
    op = RieszFellerOperator(RieszFellerParams(1.5, theta), sigma=0.7)
    bump = ProfileGrid.from_function(lambda x: np.exp(-(x**2)), -8.0, 8.0, 161, 0.0, 0.0)
    stencil = op.stencil(bump.n, bump.h)
    # apply(v)_i = Σ_j K_j v_{i+j}
    via_stencil = np.convolve(bump.values, stencil[::-1])[bump.n - 1 : 2 * bump.n - 1]
    np.testing.assert_allclose(via_stencil, op.apply(bump).values, atol=1e-10)


def test_caputo_plus_laplacian() -> None:
    op = CaputoPlusLaplacian(gamma1=-1.0, alpha=0.5, gamma2=0.5)
    assert op.monotone
    assert np.all(op.symbol(K).real <= 1e-14)
    assert op.dt_limit(0.1) == pytest.approx(0.25 * 0.01 / 0.5)

    with pytest.raises(UnsupportedParameterError):
        CaputoPlusLaplacian(gamma1=1.0, alpha=0.5, gamma2=0.5)
    loose = CaputoPlusLaplacian(gamma1=1.0, alpha=0.5, gamma2=0.5, allow_non_levy=True)
    assert not loose.monotone
    with pytest.raises(UnsupportedParameterError):
        CaputoPlusLaplacian(gamma1=-1.0, alpha=1.5, gamma2=0.5)


def test_fowler_band() -> None:
    eps, delta, alpha = 1.0, 1.0, 0.5
    k_c = fowler_unstable_band(eps, delta, alpha)
    assert k_c == pytest.approx(math.cos(math.pi / 4.0) ** 2)
    assert fowler_linear_growth(eps, delta, alpha, 0.5 * k_c) > 0.0
    assert fowler_linear_growth(eps, delta, alpha, 2.0 * k_c) < 0.0
    assert fowler_linear_growth(eps, delta, alpha, k_c) == pytest.approx(0.0, abs=1e-12)
    assert not FowlerOperator(eps, delta, alpha).monotone
    with pytest.raises(ConfigError):
        FowlerOperator(0.0, 1.0, 0.5)
