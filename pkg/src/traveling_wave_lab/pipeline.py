# src/traveling_wave_lab/pipeline.py

"""
Acceptance experiments, run in sequence; results go to acceptance.json.

    traveling-wave-lab pipeline --out outputs [--items 1,2,3]

Each item returns {"id", "name", "passed", "measured", "thresholds"}; the
command exits with 1 when any selected item fails.
"""

from __future__ import annotations

import argparse
import logging
import math
from typing import Any, Callable, Sequence

import numpy as np
from tqdm import tqdm

from . import config
from .cli.common import base_parser, out_dir, run_command, threads
from .cli.region_scan import region_scan
from .errors import ConfigError, NoTravelingWaveError
from .front_evolution import march_fractional_twe, solve_rd_riesz_feller_tw
from .grids import ProfileGrid
from .heat_kernel import DEFAULT_DIAMOND_POINTS, kernel_property_sweep
from .levy_ops import (
    RieszFellerParams,
    apply_caputo,
    apply_riesz_feller,
    exponential_left_tail,
    rf_crosscheck,
    rf_sup_bound,
)
from .nonlinearities import FluxSpec, ReactionSpec, ShockTriple
from .outputs import write_json
from .phase_plane import is_monotone, kdvb_tail_transition, shoot_bistable, solve_kdvb_tw
from .run_config import RunConfig
from .shock_classify import ShockClass, classify_shock, jms_admissible_set, jms_beta

logger = logging.getLogger(__name__)

Item = Callable[[RunConfig], dict[str, Any]]


def _item(number: int, name: str, measured: dict[str, Any], checks: dict[str, bool], thresholds: dict[str, Any]):
    passed = all(checks.values())
    if passed:
        logger.info("[%d] %s : ok", number, name)
    else:
        logger.warning("[%d] %s : FAILED (%s)", number, name, ", ".join(k for k, v in checks.items() if not v))
    return {
        "id": number,
        "name": name,
        "passed": passed,
        "measured": measured,
        "checks": checks,
        "thresholds": thresholds,
    }


def _sup_error(profile: ProfileGrid, exact: Callable[[np.ndarray], np.ndarray]) -> float:
    return float(np.max(np.abs(profile.values - exact(profile.xi))))


# -------------------------------------------------------------------
# 1) Local fronts with closed forms
# -------------------------------------------------------------------


def bistable_exact_front(cfg: RunConfig) -> dict[str, Any]:
    """u(1-u)(u-0.3): speed (1-2a₀)/√2 and profile (1 + e^{ξ/√2})^{-1}."""
    a0 = 0.3
    r = ReactionSpec.bistable_cubic(a0)
    exact_speed = (1.0 - 2.0 * a0) / math.sqrt(2.0)
    shot = shoot_bistable(r, 1.0, 1.0, 0.0)
    profile_error = _sup_error(shot.profile, lambda x: 1.0 / (1.0 + np.exp(x / math.sqrt(2.0))))
    evolved = solve_rd_riesz_feller_tw(RieszFellerParams(2.0, 0.0), r, 1.0, 0.0, L=50.0, n=2048, T=60.0)
    measured = {
        "shooting_speed": shot.speed,
        "exact_speed": exact_speed,
        "evolution_speed": evolved.speed,
        "profile_sup_error": profile_error,
    }
    checks = {
        "shooting_speed": abs(shot.speed - exact_speed) <= 1e-4,
        "evolution_speed": abs(evolved.speed - exact_speed) <= 1e-2,
        "profile": profile_error <= 1e-4,
    }
    return _item(1, "bistable exact front", measured, checks, {"speed": 1e-4, "evolution": 1e-2, "profile": 1e-4})


def burgers_viscous_shock(cfg: RunConfig) -> dict[str, Any]:
    eps = 1.0
    f = FluxSpec.burgers()
    triple = ShockTriple.from_flux(f, 1.0, 0.0)
    res = solve_kdvb_tw(f, eps, 0.0, triple)
    m = 0.5 * (triple.u_minus + triple.u_plus)
    n = 0.5 * (triple.u_minus - triple.u_plus)
    error = _sup_error(res.profile, lambda x: m - n * np.tanh(n * x / (2.0 * eps)))
    measured = {"profile_sup_error": error, "residual_sup": res.residual_sup, "speed": res.speed}
    checks = {"profile": error <= 1e-6, "residual": res.residual_sup <= 1e-8}
    return _item(2, "Burgers viscous shock", measured, checks, {"profile": 1e-6, "residual": 1e-8})


def cubic_undercompressive_kink(cfg: RunConfig) -> dict[str, Any]:
    eps = delta = 1.0
    beta = jms_beta(eps, delta)
    u_minus = 1.2
    u_plus = -u_minus + beta
    f = FluxSpec.cubic()
    triple = ShockTriple.from_flux(f, u_minus, u_plus)
    m, n = 0.5 * (u_minus + u_plus), 0.5 * (u_minus - u_plus)
    k = abs(n) / math.sqrt(2.0 * delta)
    res = solve_kdvb_tw(f, eps, delta, triple)
    error = _sup_error(res.profile, lambda x: m - n * np.tanh(k * x))
    label = classify_shock(f, triple)
    measured = {
        "profile_sup_error": error,
        "shock_class": label.value,
        "rh_speed": triple.c,
        "3m2_plus_n2": 3.0 * m * m + n * n,
        "m": m,
        "beta_half": 0.5 * beta,
    }
    checks = {
        "profile": error <= 1e-6,
        "slow_undercompressive": label is ShockClass.SLOW_UNDERCOMPRESSIVE,
        "rh_speed": abs(triple.c - (3.0 * m * m + n * n)) <= 1e-12,
        "m_is_beta_half": abs(m - 0.5 * beta) <= 1e-12,
    }
    return _item(3, "cubic undercompressive kink", measured, checks, {"profile": 1e-6, "rh_speed": 1e-12})


def admissible_sets(cfg: RunConfig) -> dict[str, Any]:
    eps = delta = 1.0
    beta = jms_beta(eps, delta)
    expected = {
        0.4: ((-0.2, 0.4),),
        2.0 * beta: ((-beta, 2.0 * beta),),
        1.2: ((-beta, 1.2),),
    }
    isolated = {0.4: (), 2.0 * beta: (), 1.2: (-1.2 + beta,)}
    measured, checks = {}, {}
    for u_minus, intervals in expected.items():
        S = jms_admissible_set(u_minus, eps, delta)
        key = f"{u_minus:.4f}"
        measured[key] = S.to_dict()
        checks[key] = bool(
            np.allclose(np.array(S.intervals), np.array(intervals), rtol=0.0, atol=1e-15)
            and np.allclose(S.isolated, isolated[u_minus], rtol=0.0, atol=1e-15)
        )
    # continuity at the branch point: as u_- ↓ 2β, {-u_- + β} ∪ [-β, u_-) tends to [-β, 2β)
    above = jms_admissible_set(2.0 * beta * (1.0 + 1e-12), eps, delta)
    checks["branch_point_continuity"] = bool(
        abs(above.isolated[0] - (-beta)) <= 1e-9 and abs(above.intervals[0][0] - (-beta)) <= 1e-15
    )
    return _item(4, "cubic KdV-Burgers admissible sets", measured, checks, {"exact": 1e-15})


# -------------------------------------------------------------------
# 2) Heat kernels and Lévy operators
# -------------------------------------------------------------------


def heat_kernel_suite(cfg: RunConfig) -> dict[str, Any]:
    df = kernel_property_sweep(DEFAULT_DIAMOND_POINTS, t=0.7, n_jobs=threads(cfg))
    gauss = df.loc[(df["a"] == 2.0) & (df["theta"] == 0.0), "gaussian_deviation"].iloc[0]
    leak = df.loc[(df["a"] == 0.5) & (df["theta"] == -0.5), "half_line_leakage"].iloc[0]
    measured = {
        "points": len(df),
        "max_mass_error": float(df["mass_error"].max()),
        "max_scaling_deviation": float(df["scaling_deviation"].max()),
        "max_semigroup_deviation": float(df["semigroup_deviation"].max()),
        "min_density": float(df["min_density"].min()),
        "gaussian_deviation": float(gauss),
        "half_line_leakage": float(leak),
    }
    checks = {
        "points": len(df) >= 10,
        "mass": measured["max_mass_error"] <= 1e-6,
        "scaling": measured["max_scaling_deviation"] <= 1e-4,
        "semigroup": measured["max_semigroup_deviation"] <= 1e-5,
        "positivity": measured["min_density"] >= -1e-8,
        "gaussian": measured["gaussian_deviation"] <= 1e-8,
        "half_line": measured["half_line_leakage"] <= 1e-6,
    }
    thresholds = {"mass": 1e-6, "scaling": 1e-4, "semigroup": 1e-5, "positivity": -1e-8, "gaussian": 1e-8, "half_line": 1e-6}
    return _item(5, "heat kernel properties", measured, checks, thresholds)


def caputo_error(alpha: float, lam: float, h: float, x0: float = -4.0) -> float:
    """Relative sup error of D^α_+ e^{λx} = λ^α e^{λx} on [x0 + 1, 0]."""
    n = int(round(-x0 / h)) + 1
    u = ProfileGrid.from_function(lambda x: np.exp(lam * x), x0, 0.0, n, left_state=0.0, right_state=1.0)
    out = apply_caputo(alpha, u, left_tail=exponential_left_tail(alpha, lam, x0)).values
    exact = lam**alpha * u.values
    inner = u.xi >= x0 + 1.0
    return float(np.max(np.abs(out[inner] - exact[inner]) / exact[inner]))


def caputo_identity(cfg: RunConfig, h: float = 1e-3) -> dict[str, Any]:
    measured, checks = {}, {}
    for alpha, lam in ((0.5, 1.0), (0.5, 2.0), (0.3, 1.0)):
        coarse, fine = caputo_error(alpha, lam, h), caputo_error(alpha, lam, h / 2.0)
        key = f"alpha={alpha},lambda={lam}"
        measured[key] = {"error_h": coarse, "error_h2": fine, "ratio": coarse / fine}
        checks[key] = coarse <= 1e-3 and fine <= 0.55 * coarse
    return _item(6, "Caputo eigenfunction identity", measured, checks, {"relative": 1e-3, "refinement": 0.55})


def operator_crosscheck(cfg: RunConfig) -> dict[str, Any]:
    u = ProfileGrid.from_function(lambda x: np.exp(-(x**2)), -20.0, 20.0, 4001, left_state=0.0, right_state=0.0)
    norm1, norm2 = math.sqrt(2.0 / math.e), 2.0
    measured, checks = {}, {}
    for a in (0.5, 1.5, 1.9):
        edge = min(a, 2.0 - a) / 2.0
        for theta in (0.0, edge, -edge):
            p = RieszFellerParams(a, theta)
            key = f"a={a},theta={theta:+.3g}"
            deviation = rf_crosscheck(p, u)
            entry = {"deviation": deviation}
            ok = deviation <= config.CROSSCHECK_TOL
            if 1.0 < a < 2.0:
                sup = float(np.max(np.abs(apply_riesz_feller(p, u).values)))
                bound = rf_sup_bound(p, 1.0, norm1, norm2)
                entry.update(sup=sup, bound=bound)
                ok = ok and sup <= bound
            measured[key] = entry
            checks[key] = ok
    return _item(7, "Riesz-Feller quadrature vs spectral", measured, checks, {"sup_norm": config.CROSSCHECK_TOL})


# -------------------------------------------------------------------
# 3) Nonlocal fronts
# -------------------------------------------------------------------


def fkdvb_marching(cfg: RunConfig) -> dict[str, Any]:
    f = FluxSpec.burgers()
    triple = ShockTriple.from_flux(f, 1.0, 0.0)
    res = march_fractional_twe(f, 1.0, 0.5, triple)
    d = res.diagnostics
    try:
        march_fractional_twe(f, 1.0, 0.5, ShockTriple.from_flux(f, 0.0, 1.0))
        rejected = False
    except NoTravelingWaveError:
        rejected = True
    measured = {
        "monotone": res.monotone,
        "endstate_error": d["endstate_error"],
        "endstate_refinement": d["endstate_refinement"],
        "residual_sup": res.residual_sup,
        "nc_global": d["nc_global"],
        "nc_running_min": d["nc_running_min"],
        "anti_lax_rejected": rejected,
    }
    checks = {
        "monotone": res.monotone,
        "endstate": d["endstate_error"] <= 1e-3,
        "residual": res.residual_sup <= 1e-3,
        "necessary_conditions": min(d["nc_global"], d["nc_running_min"]) >= -1e-8,
        "anti_lax": rejected,
    }
    return _item(8, "fractional KdV-Burgers marching", measured, checks, {"endstate": 1e-3, "residual": 1e-3})


def riesz_feller_bistable(cfg: RunConfig) -> dict[str, Any]:
    r = ReactionSpec.bistable_cubic(0.3)
    measured, checks = {}, {}
    for theta in (0.0, 0.4):
        p = RieszFellerParams(1.5, theta)
        first = solve_rd_riesz_feller_tw(p, r, 1.0, 0.0, L=50.0, n=2048, T=60.0)
        other_start = ProfileGrid.tanh_ramp(1.0, 0.0, 50.0, 2048, width=4.0, center=-10.0)
        second = solve_rd_riesz_feller_tw(p, r, 1.0, 0.0, L=50.0, n=2048, T=60.0, u0=other_start)
        key = f"theta={theta}"
        measured[key] = {
            "speed": first.speed,
            "speed_other_start": second.speed,
            "residual_sup": first.residual_sup,
            "monotone": first.monotone,
        }
        checks[key] = bool(
            first.monotone
            and is_monotone(first.profile)
            and first.residual_sup <= 1e-3
            and abs(first.speed - second.speed) <= 1e-2
        )
    return _item(9, "Riesz-Feller bistable evolution", measured, checks, {"residual": 1e-3, "speed_spread": 1e-2})


def tail_threshold(cfg: RunConfig) -> dict[str, Any]:
    f = FluxSpec.burgers()
    triple = ShockTriple.from_flux(f, 1.0, 0.0)
    shooting, predicted = kdvb_tail_transition(f, 1.0, triple, tol=1e-3)
    measured = {"shooting": shooting, "discriminant_zero": predicted}
    checks = {"agreement": predicted is not None and abs(shooting - predicted) <= 1e-2}
    return _item(10, "KdV-Burgers oscillation threshold", measured, checks, {"eps": 1e-2})


def region_map_scan(cfg: RunConfig) -> dict[str, Any]:
    scan_cfg = RunConfig(
        {
            **cfg.values,
            "flux.kind": "cubic",
            "kdvb.eps": 1.0,
            "kdvb.delta": 1.0,
            "scan.resolution": cfg.get("scan.resolution", 128),
            "scan.queries": cfg.get("scan.queries", 1000),
        },
        cfg.source,
    )
    report = region_scan(scan_cfg)
    cell = (report["u_minus_range"][1] - report["u_minus_range"][0]) / (report["resolution"] - 1)
    measured = {k: report[k] for k in ("counts", "line_points", "line_start", "branch_point", "mismatches", "queries")}
    checks = {
        "resolution": report["resolution"] >= 128,
        "wedges": report["counts"].get("Monostable", 0) > 0 and report["counts"].get("Bistable", 0) > 0,
        "halfline": report["line_points"] > 0 and report["line_start"] >= report["branch_point"] - cell,
        "point_queries": report["queries"] >= 1000 and report["mismatches"] == 0,
    }
    return _item(11, "region map", measured, checks, {"resolution": 128, "queries": 1000, "mismatches": 0})


ITEMS: dict[int, Item] = {
    1: bistable_exact_front,
    2: burgers_viscous_shock,
    3: cubic_undercompressive_kink,
    4: admissible_sets,
    5: heat_kernel_suite,
    6: caputo_identity,
    7: operator_crosscheck,
    8: fkdvb_marching,
    9: riesz_feller_bistable,
    10: tail_threshold,
    11: region_map_scan,
}


# -------------------------------------------------------------------
# 4) Orchestration
# -------------------------------------------------------------------


def _selected(items: str | None) -> list[int]:
    if not items:
        return list(ITEMS)
    chosen = [int(part) for part in items.split(",") if part.strip()]
    unknown = [i for i in chosen if i not in ITEMS]
    if unknown:
        raise ConfigError(f"unknown acceptance items {unknown}", items=unknown)
    return chosen


def run_pipeline(cfg: RunConfig, args: argparse.Namespace | None = None) -> dict[str, Any]:
    selected = _selected(getattr(args, "items", None))
    results = []
    for number in tqdm(selected, desc="Acceptance", disable=not config.SHOW_PROGRESS):
        logger.info("[%d] %s", number, ITEMS[number].__name__)
        results.append(ITEMS[number](cfg))
    report = {
        "command": "pipeline",
        "items": results,
        "passed": all(item["passed"] for item in results),
    }
    write_json(report, out_dir(cfg) / "acceptance.json", schema="acceptance")
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = base_parser("traveling-wave-lab pipeline", "Run the acceptance experiments")
    parser.add_argument("--items", default=None, help="comma-separated subset, e.g. 1,2,4")
    args = parser.parse_args(argv)
    holder: dict[str, Any] = {}

    def command(cfg: RunConfig, ns: argparse.Namespace) -> dict[str, Any]:
        holder["report"] = run_pipeline(cfg, ns)
        return holder["report"]

    code = run_command(command, args)
    if code == 0 and not holder["report"]["passed"]:
        return 1
    return code


if __name__ == "__main__":
    raise SystemExit(main())
