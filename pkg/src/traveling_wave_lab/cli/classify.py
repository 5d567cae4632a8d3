# src/traveling_wave_lab/cli/classify.py

from __future__ import annotations

import argparse
import logging
from typing import Any, Sequence

from ..phase_plane import kdvb_reaction
from ..run_config import RunConfig
from ..shock_classify import (
    classify_reaction,
    classify_shock,
    is_convex_on,
    jms_admissible_set,
    lax_condition,
    oleinik_condition,
    potential_gap,
    require_rankine_hugoniot,
    rh_residual,
)
from ..outputs import write_json
from .common import base_parser, flux_from, main_from, out_dir, triple_from

logger = logging.getLogger(__name__)

# tolerance for "on the halfline" u_+ = -u_- + β with hand-typed values
LINE_TOL = 1e-4


def classify(cfg: RunConfig, args: argparse.Namespace | None = None) -> dict[str, Any]:
    """
    Shock and reaction labels of one triple (u_-, u_+, c).

    Writes classify.json in the output directory and returns the report.
    """
    f = flux_from(cfg)
    triple = triple_from(cfg, f)
    require_rankine_hugoniot(f, triple)

    shock = classify_shock(f, triple)
    oleinik = oleinik_condition(f, triple)
    r = kdvb_reaction(f, triple)
    reaction = classify_reaction(r, triple.u_minus, triple.u_plus)
    logger.info("shock %s, -h %s", shock.value, reaction.value)

    report: dict[str, Any] = {
        "command": "classify",
        "flux": f.to_dict(),
        "triple": triple.to_dict(),
        "rh_residual": rh_residual(f, triple),
        "shock_class": shock.value,
        "lax": lax_condition(f, triple),
        "oleinik": {"holds": oleinik.holds, "margin": oleinik.margin, "worst_w": oleinik.worst_w},
        "convex": is_convex_on(f, triple.lo, triple.hi),
        "reaction_class": reaction.value,
        "potential_gap": potential_gap(r, triple.u_minus, triple.u_plus),
        "admissible": oleinik.holds,
        "jms": None,
    }

    eps, delta = cfg.get("kdvb.eps"), cfg.get("kdvb.delta")
    if f.kind == "cubic" and eps is not None and delta is not None and eps > 0 and delta > 0 and triple.u_minus > 0:
        S = jms_admissible_set(triple.u_minus, eps, delta)
        on_line = any(abs(triple.u_plus - p) <= LINE_TOL for p in S.isolated)
        report["jms"] = {
            **S.to_dict(),
            "contains_u_plus": S.contains(triple.u_plus, atol=LINE_TOL),
            "on_undercompressive_line": on_line,
        }
        report["admissible"] = report["jms"]["contains_u_plus"]

    write_json(report, out_dir(cfg) / "classify.json", schema="classify")
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("traveling-wave-lab classify", "Shock and reaction classification of a shock triple")
    return main_from(parser, classify, argv)


if __name__ == "__main__":
    raise SystemExit(main())
