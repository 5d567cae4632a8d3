# src/traveling_wave_lab/cli/region_scan.py

from __future__ import annotations

import argparse
import logging
from typing import Any, Sequence

import pandas as pd

from ..nonlinearities import FluxSpec, ReactionSpec, ShockTriple, kdvb_h
from ..outputs import write_csv, write_json, write_svg
from ..plotting import region_figure
from ..run_config import RunConfig
from ..shock_classify import classify_reaction, jms_beta, region_map, region_point
from .common import base_parser, flux_from, main_from, out_dir, rng, threads, wants_svg

logger = logging.getLogger(__name__)


def point_queries(
    f: FluxSpec,
    region: pd.DataFrame,
    eps: float,
    delta: float,
    n_queries: int,
    generator,
) -> pd.DataFrame:
    """
    Random endstate pairs labeled twice: by the region-map labeling and by
    classify_reaction on -h through the derivative/sign-pattern rule.
    """
    lo_m, hi_m = region["u_minus"].min(), region["u_minus"].max()
    lo_p, hi_p = region["u_plus"].min(), region["u_plus"].max()
    rows = []
    for u_minus, u_plus in zip(generator.uniform(lo_m, hi_m, n_queries), generator.uniform(lo_p, hi_p, n_queries)):
        u_minus, u_plus = float(u_minus), float(u_plus)
        mapped = region_point(f, u_minus, u_plus, eps, delta)["reaction_class"]
        triple = ShockTriple.from_flux(f, u_minus, u_plus)
        queried = classify_reaction(ReactionSpec(-kdvb_h(f, triple)), u_minus, u_plus, pathway="generic").value
        rows.append({"u_minus": u_minus, "u_plus": u_plus, "region_map": mapped, "classify_reaction": queried})
    df = pd.DataFrame(rows)
    df["match"] = df["region_map"] == df["classify_reaction"]
    return df


def region_scan(cfg: RunConfig, args: argparse.Namespace | None = None) -> dict[str, Any]:
    """Region map of the KdV-Burgers endstate plane: region_map.csv, region_scan.json, region_map.svg."""
    f = flux_from(cfg)
    eps = cfg.positive("kdvb.eps", 1.0)
    delta = cfg.positive("kdvb.delta", 1.0)
    resolution = cfg.get("scan.resolution", 128)
    um_range = cfg.get("scan.u_minus_range", (-2.0, 2.0))
    up_range = cfg.get("scan.u_plus_range", (-2.0, 2.0))

    region = region_map(f, um_range, up_range, eps, delta, resolution, n_jobs=threads(cfg))
    beta = jms_beta(eps, delta)

    queries = point_queries(f, region, eps, delta, cfg.get("scan.queries", 1000), rng(cfg))
    mismatches = int((~queries["match"]).sum())
    if mismatches:
        logger.warning("region map disagrees with classify_reaction at %d points", mismatches)

    line = region[region["on_undercompressive_line"]]
    report = {
        "command": "region_scan",
        "flux": f.to_dict(),
        "eps": eps,
        "delta": delta,
        "resolution": resolution,
        "u_minus_range": list(um_range),
        "u_plus_range": list(up_range),
        "beta": beta,
        "branch_point": 2.0 * beta,
        "counts": {k: int(v) for k, v in region["reaction_class"].value_counts().sort_index().items()},
        "shock_counts": {k: int(v) for k, v in region["shock_class"].value_counts().sort_index().items()},
        "admissible_points": int(region["admissible"].sum()),
        "line_points": len(line),
        "line_start": float(line["u_minus"].min()) if len(line) else None,
        "queries": len(queries),
        "mismatches": mismatches,
    }

    target = out_dir(cfg)
    write_csv(region, target / "region_map.csv")
    if wants_svg(cfg):
        figure = region_figure(region, eps=eps, delta=delta, title=f"ε = {eps:g}, δ = {delta:g}")
        write_svg(figure, target / "region_map.svg")
    write_json(report, target / "region_scan.json", schema="region_scan")
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("traveling-wave-lab region-scan", "Classification map over the (u_-, u_+) plane")
    return main_from(parser, region_scan, argv)


if __name__ == "__main__":
    raise SystemExit(main())
