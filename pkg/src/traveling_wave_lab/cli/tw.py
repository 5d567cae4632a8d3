# src/traveling_wave_lab/cli/tw.py

"""
Traveling wave profiles, four modes:

  local-shoot  : phase-plane shooting (local reaction-diffusion or KdV-Burgers)
  rd-evolve    : time evolution with a Riesz-Feller or convolution operator
  fkdvb-march  : marching the fractional KdV-Burgers profile equation
  fowler       : exploratory evolution of Fowler's equation

Outputs tw_profile.csv (xi, u, v), tw.json and optionally tw_profile.svg.
"""

from __future__ import annotations

import argparse
import logging
import math
from typing import Any, Sequence

from ..errors import NoTravelingWaveError
from ..front_evolution import (
    fowler_experiment,
    march_fractional_twe,
    solve_convolution_rd_tw,
    solve_rd_riesz_feller_tw,
)
from ..grids import KernelSpec
from ..levy_ops import RieszFellerParams
from ..outputs import write_csv, write_json, write_svg
from ..phase_plane import TWSResult, min_speed_estimate, shoot_bistable, solve_kdvb_tw, solve_rd_tw
from ..plotting import profile_figure
from ..run_config import RunConfig
from ..shock_classify import (
    ReactionClass,
    classify_reaction,
    potential_gap,
    require_rankine_hugoniot,
    speed_sign_admissible,
)
from .common import base_parser, flux_from, main_from, out_dir, reaction_from, triple_from, wants_svg

logger = logging.getLogger(__name__)


# -------------------------------------------------------------------
# 1) Modes
# -------------------------------------------------------------------


def _local_shoot(cfg: RunConfig) -> TWSResult:
    tol = cfg.get("tw.tol", 1e-10)
    if "shock.u_minus" in cfg:
        f = flux_from(cfg)
        triple = triple_from(cfg, f)
        require_rankine_hugoniot(f, triple)
        return solve_kdvb_tw(f, cfg.positive("kdvb.eps"), cfg.get("kdvb.delta", 0.0), triple, tol=tol)

    r, u_minus, u_plus = reaction_from(cfg)
    sigma = cfg.positive("operator.sigma", 1.0)
    if "tw.speed" in cfg:
        return solve_rd_tw(r, sigma, cfg.get("tw.speed"), u_minus, u_plus, tol=tol)

    label = classify_reaction(r, u_minus, u_plus)
    if label is ReactionClass.BISTABLE:
        return shoot_bistable(r, sigma, u_minus, u_plus, tol=tol)
    if label in (ReactionClass.MONOSTABLE, ReactionClass.REVERSED_MONOSTABLE):
        estimate = min_speed_estimate(r, sigma, u_minus, u_plus)
        c = estimate.closed_form if estimate.closed_form is not None else estimate.shooting
        logger.info("monostable: speed not given, using the minimal speed %.6g", c)
        return solve_rd_tw(r, sigma, c, u_minus, u_plus, tol=tol)
    # no speed given: the classification decides between exit 4 and 5
    return solve_rd_tw(r, sigma, 0.0, u_minus, u_plus, tol=tol)


def _rd_evolve(cfg: RunConfig) -> TWSResult:
    r, u_minus, u_plus = reaction_from(cfg)
    if "tw.speed" in cfg:
        speed = cfg.get("tw.speed")
        sign = int(math.copysign(1, speed)) if speed != 0 else 0
        if not speed_sign_admissible(r, u_minus, u_plus, sign):
            raise NoTravelingWaveError(
                f"no front with speed of sign {sign:+d} for these endstates",
                condition="potential balance: sgn(c) = -sgn(∫r)",
                requested_speed=speed,
                potential_gap=potential_gap(r, u_minus, u_plus),
                reaction_class=classify_reaction(r, u_minus, u_plus).value,
            )

    L = cfg.positive("grid.L", 50.0)
    n = cfg.get("grid.n", 2048)
    common = {"L": L, "n": n, "dt": cfg.get("time.dt"), "T": cfg.positive("time.T", 60.0)}
    if cfg.get("operator.kind", "riesz_feller") == "convolution":
        width = cfg.positive("operator.kernel_width", 1.0)
        h = 2.0 * L / (n - 1)
        build = KernelSpec.hat if cfg.get("operator.kernel", "hat") == "hat" else KernelSpec.box
        J = build(width, h, normalize=True, exponential_moment=True)
        return solve_convolution_rd_tw(J, r, u_minus, u_plus, **common)

    p = RieszFellerParams(cfg.get("operator.a", 2.0), cfg.get("operator.theta", 0.0))
    return solve_rd_riesz_feller_tw(p, r, u_minus, u_plus, sigma=cfg.positive("operator.sigma", 1.0), **common)


def _fkdvb_march(cfg: RunConfig) -> TWSResult:
    f = flux_from(cfg)
    triple = triple_from(cfg, f)
    return march_fractional_twe(
        f,
        cfg.positive("kdvb.eps"),
        cfg.get("operator.alpha", 0.5),
        triple,
        h=cfg.get("grid.h"),
        xi_max=cfg.positive("tw.xi_max", 400.0),
    )


MODES = {
    "local-shoot": _local_shoot,
    "rd-evolve": _rd_evolve,
    "fkdvb-march": _fkdvb_march,
}


# -------------------------------------------------------------------
# 2) Command
# -------------------------------------------------------------------


def _fowler(cfg: RunConfig) -> dict[str, Any]:
    f = flux_from(cfg)
    triple = triple_from(cfg, f)
    report = fowler_experiment(
        f,
        cfg.positive("kdvb.eps"),
        cfg.positive("kdvb.delta"),
        cfg.get("operator.alpha", 0.5),
        triple,
        L=cfg.positive("grid.L", 100.0),
        n=cfg.get("grid.n", 2048),
        dt=cfg.get("time.dt"),
        T=cfg.positive("time.T", 40.0),
    )
    target = out_dir(cfg)
    if report.profile is not None:
        frame = report.profile.to_frame()
        write_csv(frame, target / "tw_profile.csv")
        if wants_svg(cfg):
            write_svg(profile_figure(frame, title="Fowler (conjectural)"), target / "tw_profile.svg")
    else:
        logger.warning("Fowler: no traveling front extracted, only the report is written")
    return {"command": "tw", "mode": "fowler", "conjectural": True, "fowler": report.to_dict()}


def tw(cfg: RunConfig, args: argparse.Namespace | None = None) -> dict[str, Any]:
    mode = cfg.get("tw.mode", "local-shoot")
    logger.info("tw: mode %s", mode)
    if mode == "fowler":
        report = _fowler(cfg)
    else:
        res = MODES[mode](cfg)
        if res.conjectural:
            logger.warning("%s: outside the regime covered by the existence theory", mode)
        target = out_dir(cfg)
        frame = res.profile_frame()
        write_csv(frame, target / "tw_profile.csv")
        if wants_svg(cfg):
            write_svg(profile_figure(frame, title=f"{mode}, c = {res.speed:.6g}"), target / "tw_profile.svg")
        report = {"command": "tw", "mode": mode, **res.summary()}
    write_json(report, out_dir(cfg) / "tw.json", schema="tw")
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("traveling-wave-lab tw", "Traveling wave profile and speed")
    return main_from(parser, tw, argv)


if __name__ == "__main__":
    raise SystemExit(main())
