# src/traveling_wave_lab/cli/kernel.py

from __future__ import annotations

import argparse
import logging
from typing import Any, Sequence

from ..heat_kernel import compute_kernel, kernel_property_report
from ..levy_ops import RieszFellerParams
from ..outputs import write_csv, write_json, write_svg
from ..plotting import kernel_figure
from ..run_config import RunConfig
from .common import base_parser, main_from, out_dir, wants_svg

logger = logging.getLogger(__name__)


def kernel(cfg: RunConfig, args: argparse.Namespace | None = None) -> dict[str, Any]:
    """Heat kernel G^a_θ(·, t) as kernel.csv (x, density) plus kernel.json with the property checks."""
    p = RieszFellerParams(cfg.require("operator.a"), cfg.get("operator.theta", 0.0))
    t = cfg.positive("kernel.t", 1.0)
    n = cfg.get("kernel.n")
    sample = compute_kernel(p, t, L=cfg.get("kernel.L"), n=n)
    logger.info("kernel (a=%s, θ=%s, t=%s): %d points on [-%g, %g)", p.a, p.theta, t, sample.n, sample.L, sample.L)

    report = {
        "command": "kernel",
        **kernel_property_report(p, t, s=cfg.get("kernel.s"), n=n),
        "window_L": sample.L,
        "window_mass": sample.window_mass,
    }

    target = out_dir(cfg)
    frame = sample.to_frame()
    write_csv(frame, target / "kernel.csv")
    if wants_svg(cfg):
        write_svg(kernel_figure(frame, title=f"a = {p.a:g}, θ = {p.theta:g}, t = {t:g}"), target / "kernel.svg")
    write_json(report, target / "kernel.json", schema="kernel")
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("traveling-wave-lab kernel", "Riesz-Feller heat kernel and its properties")
    return main_from(parser, kernel, argv)


if __name__ == "__main__":
    raise SystemExit(main())
