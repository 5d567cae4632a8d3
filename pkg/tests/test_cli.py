from __future__ import annotations

import json
import math

import pandas as pd
import pytest

import traveling_wave_lab
from traveling_wave_lab.cli import classify, tw


def _run(argv: list[str], capsys) -> tuple[int, dict]:
    code = traveling_wave_lab.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else {}


# ---------- classify ----------


def test_classify_burgers_shock(write_config, tmp_path, capsys) -> None:
    cfg = write_config({"flux.kind": "burgers", "shock.u_minus": 1, "shock.u_plus": 0})
    code, report = _run(["classify", "--config", str(cfg), "--out", str(tmp_path)], capsys)
    assert code == 0
    assert report["shock_class"] == "Classical"
    assert report["reaction_class"] == "Monostable"
    assert report["triple"]["c"] == pytest.approx(0.5)
    assert report["jms"] is None
    on_disk = json.loads((tmp_path / "classify.json").read_text())
    assert on_disk == report


def test_classify_cubic_undercompressive(write_config, tmp_path, capsys) -> None:
    cfg = write_config(
        {"flux.kind": "cubic", "shock.u_minus": 1.2, "shock.u_plus": -0.7286, "kdvb.eps": 1, "kdvb.delta": 1}
    )
    code, report = _run(["classify", "--config", str(cfg), "--out", str(tmp_path)], capsys)
    assert code == 0
    assert report["shock_class"] == "SlowUndercompressive"
    assert report["reaction_class"] == "Bistable"
    assert report["jms"]["on_undercompressive_line"]
    assert report["admissible"]


def test_inconsistent_speed_exits_3(write_config, tmp_path, capsys) -> None:
    cfg = write_config({"flux.kind": "burgers", "shock.u_minus": 1, "shock.u_plus": 0, "shock.c": 0.7})
    code, err = _run(["classify", "--config", str(cfg), "--out", str(tmp_path)], capsys)
    assert code == 3
    assert err["error"] == "InconsistentTripleError"
    assert err["reason"]["expected_c"] == pytest.approx(0.5)
    assert not (tmp_path / "classify.json").exists()


def test_configuration_errors_exit_2(write_config, tmp_path, capsys) -> None:
    code, err = _run(["classify", "--config", str(tmp_path / "absent.cfg")], capsys)
    assert code == 2
    assert err["status"] == "error"

    cfg = write_config({"flux.kind": "burgers", "shock.u_minus": 1, "shock.u_plus": 0})
    assert classify.main(["--config", str(cfg), "--out", str(tmp_path), "--threads", "0"]) == 2


def test_unknown_command(capsys) -> None:
    assert traveling_wave_lab.main(["integrate"]) == 2
    assert traveling_wave_lab.main([]) == 2
    assert "usage" in capsys.readouterr().err


# ---------- tw ----------


def test_tw_local_bistable_front(write_config, tmp_path, capsys) -> None:
    cfg = write_config({"tw.mode": "local-shoot", "reaction.kind": "bistable_cubic", "reaction.a0": 0.3})
    code, report = _run(["tw", "--config", str(cfg), "--out", str(tmp_path), "--svg"], capsys)
    assert code == 0
    assert report["mode"] == "local-shoot"
    assert report["speed"] == pytest.approx(0.4 / math.sqrt(2.0), abs=1e-4)
    profile = pd.read_csv(tmp_path / "tw_profile.csv")
    assert list(profile.columns) == ["xi", "u", "v"]
    assert (tmp_path / "tw_profile.svg").exists()
    assert json.loads((tmp_path / "tw.json").read_text())["speed"] == report["speed"]


def test_tw_speed_sign_gate_exits_4(write_config, tmp_path, capsys) -> None:
    cfg = write_config(
        {
            "tw.mode": "rd-evolve",
            "reaction.kind": "polynomial",
            "reaction.coefficients": (0, -1, 1),
            "tw.speed": 1.0,
        }
    )
    code, err = _run(["tw", "--config", str(cfg), "--out", str(tmp_path)], capsys)
    assert code == 4
    assert err["error"] == "NoTravelingWaveError"
    assert err["reason"]["reaction_class"] == "NegativeOnInterval"
    assert not (tmp_path / "tw_profile.csv").exists()


def test_tw_reaction_without_front_exits_4(write_config, tmp_path, capsys) -> None:
    cfg = write_config(
        {"tw.mode": "rd-evolve", "reaction.kind": "polynomial", "reaction.coefficients": (0, -1, 1)}
    )
    code, err = _run(["tw", "--config", str(cfg), "--out", str(tmp_path)], capsys)
    assert code == 4
    assert err["error"] == "NoTravelingWaveError"
    assert err["reason"]["reaction_class"] == "NegativeOnInterval"
    assert err["reason"]["condition"] == "r < 0 between the endstates"


def test_tw_burgers_anti_lax_exits_4(write_config, tmp_path) -> None:
    cfg = write_config(
        {"tw.mode": "fkdvb-march", "flux.kind": "burgers", "shock.u_minus": 0, "shock.u_plus": 1, "kdvb.eps": 1}
    )
    assert tw.main(["--config", str(cfg), "--out", str(tmp_path)]) == 4


# ---------- kernel ----------


def test_kernel_command(write_config, tmp_path, capsys) -> None:
    cfg = write_config({"operator.a": 2.0, "operator.theta": 0.0, "kernel.t": 0.7, "kernel.n": 4096})
    code, report = _run(["kernel", "--config", str(cfg), "--out", str(tmp_path)], capsys)
    assert code == 0
    assert report["gaussian_deviation"] <= 1e-8
    kernel = pd.read_csv(tmp_path / "kernel.csv")
    assert list(kernel.columns) == ["x", "density"]
    assert len(kernel) == 4096


def test_kernel_outside_the_diamond_exits_2(write_config, tmp_path, capsys) -> None:
    cfg = write_config({"operator.a": 1.5, "operator.theta": 0.9})
    code, err = _run(["kernel", "--config", str(cfg), "--out", str(tmp_path)], capsys)
    assert code == 2
    assert err["error"] == "UnsupportedParameterError"


# ---------- region-scan ----------


def test_region_scan_command(write_config, tmp_path, capsys) -> None:
    cfg = write_config({"flux.kind": "cubic", "scan.resolution": 32, "scan.queries": 50, "run.seed": 7})
    code, report = _run(["region-scan", "--config", str(cfg), "--out", str(tmp_path), "--svg"], capsys)
    assert code == 0
    assert report["mismatches"] == 0
    assert report["queries"] == 50
    assert report["line_points"] > 0
    assert report["branch_point"] == pytest.approx(2.0 * math.sqrt(2.0) / 3.0)
    region = pd.read_csv(tmp_path / "region_map.csv")
    assert len(region) == 32 * 32
    assert (tmp_path / "region_map.svg").exists()
