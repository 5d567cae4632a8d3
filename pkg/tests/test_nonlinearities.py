from __future__ import annotations

import numpy as np
import pytest

from traveling_wave_lab.errors import ConfigError, DegenerateInputError
from traveling_wave_lab.nonlinearities import FluxSpec, ReactionSpec, ShockTriple, kdvb_h


def test_flux_kinds(burgers: FluxSpec, cubic: FluxSpec) -> None:
    assert burgers(2.0) == pytest.approx(2.0)
    assert burgers.derivative(3.0) == pytest.approx(3.0)
    assert cubic.second_derivative(0.5) == pytest.approx(3.0)
    assert FluxSpec.from_kind("burgers").kind == "quadratic_burgers"
    assert FluxSpec.from_kind("polynomial", [0.0, 1.0, 0.0, 2.0]).poly.degree() == 3
    with pytest.raises(ConfigError):
        FluxSpec.from_kind("sine")
    with pytest.raises(ConfigError):
        FluxSpec.polynomial([0.0, np.inf])


def test_flux_to_dict(cubic: FluxSpec) -> None:
    assert cubic.to_dict() == {"kind": "cubic", "coefficients": [0.0, 0.0, 0.0, 1.0]}


def test_triple_from_flux(burgers: FluxSpec, cubic: FluxSpec) -> None:
    assert ShockTriple.from_flux(burgers, 1.0, 0.0).c == pytest.approx(0.5)
    t = ShockTriple.from_flux(cubic, 1.2, -0.7286)
    assert t.c == pytest.approx(1.2**2 - 1.2 * 0.7286 + 0.7286**2)
    assert (t.lo, t.hi) == (-0.7286, 1.2)


def test_equal_endstates_are_degenerate(burgers: FluxSpec) -> None:
    with pytest.raises(DegenerateInputError):
        ShockTriple(1.0, 1.0, 0.0)
    with pytest.raises(DegenerateInputError):
        ShockTriple.from_flux(burgers, 0.3, 0.3)
    with pytest.raises(DegenerateInputError):
        ShockTriple(1.0, np.nan, 0.0)


def test_reaction_constructors(bistable: ReactionSpec) -> None:
    u = np.linspace(-1.0, 2.0, 7)
    np.testing.assert_allclose(bistable(u), u * (1 - u) * (u - 0.3), atol=1e-14)
    np.testing.assert_allclose(ReactionSpec.logistic()(u), u * (1 - u), atol=1e-14)

    r = ReactionSpec.cubic_from_shock(1.0, -0.4)
    assert r.u_star == pytest.approx(-0.6)
    np.testing.assert_allclose(r(np.array([1.0, -0.4, -0.6])), 0.0, atol=1e-14)
    assert bistable.u_star is None


def test_reaction_transforms(bistable: ReactionSpec) -> None:
    assert bistable.lipschitz(0.0, 1.0) == pytest.approx(0.7)
    q = bistable.shifted(1.0)
    assert q(0.0) == pytest.approx(0.0)
    assert q(-0.5) == pytest.approx(bistable(0.5))

    w = np.linspace(-1.0, 0.0, 5)
    np.testing.assert_allclose(bistable.reflected()(w), -bistable(-w), atol=1e-14)
    assert bistable.reflected().roots == (-1.0, -0.0, -0.3)
    np.testing.assert_allclose(bistable.negated()(w), -bistable(w), atol=1e-14)


def test_kdvb_h_vanishes_at_both_endstates(burgers: FluxSpec, cubic: FluxSpec) -> None:
    for f, (um, up) in ((burgers, (1.0, 0.0)), (cubic, (1.2, -0.7286)), (cubic, (-0.5, 2.0))):
        t = ShockTriple.from_flux(f, um, up)
        h = kdvb_h(f, t)
        assert h(um) == pytest.approx(0.0, abs=1e-12)
        assert h(up) == pytest.approx(0.0, abs=1e-12)

    h = kdvb_h(burgers, ShockTriple.from_flux(burgers, 1.0, 0.0))
    np.testing.assert_allclose(h.coef, [0.0, -0.5, 0.5], atol=1e-15)
