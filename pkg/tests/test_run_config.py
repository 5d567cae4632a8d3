from __future__ import annotations

import pytest

from traveling_wave_lab.errors import ConfigError
from traveling_wave_lab.run_config import RunConfig


def test_load_converts_types(write_config) -> None:
    path = write_config(
        {
            "flux.kind": "cubic",
            "shock.u_minus": 1.2,
            "grid.n": 512,
            "output.svg": "yes",
            "scan.u_minus_range": (-2, 2),
        }
    )
    cfg = RunConfig.load(path)
    assert cfg.get("flux.kind") == "cubic"
    assert cfg.get("shock.u_minus") == 1.2
    assert cfg.get("grid.n") == 512
    assert cfg.get("output.svg") is True
    assert cfg.get("scan.u_minus_range") == (-2.0, 2.0)
    assert cfg.source == str(path)
    assert cfg.to_dict()["scan.u_minus_range"] == [-2.0, 2.0]


def test_missing_file_and_defaults(tmp_path) -> None:
    assert RunConfig.load(None).values == {}
    with pytest.raises(ConfigError):
        RunConfig.load(tmp_path / "absent.cfg")


@pytest.mark.parametrize(
    "raw",
    [
        {"shock.speed": "1"},
        {"grid.n": "many"},
        {"shock.u_minus": "nan"},
        {"flux.kind": "quartic"},
        {"scan.u_plus_range": "1,2,3"},
        {"kdvb.eps": ""},
    ],
)
def test_invalid_entries(raw: dict[str, str]) -> None:
    with pytest.raises(ConfigError) as info:
        RunConfig.from_mapping(raw)
    assert info.value.exit_code == 2


def test_overrides_win_and_none_is_skipped() -> None:
    cfg = RunConfig.from_mapping({"run.threads": "4", "output.dir": "a"})
    merged = cfg.with_overrides(run__threads=2, output__dir=None)
    assert merged.get("run.threads") == 2
    assert merged.get("output.dir") == "a"
    with pytest.raises(ConfigError):
        cfg.with_overrides(run__colour="red")


def test_require_and_positive() -> None:
    cfg = RunConfig.from_mapping({"kdvb.eps": "0", "kdvb.delta": "0.5"})
    assert cfg.require("kdvb.delta") == 0.5
    assert cfg.positive("kdvb.delta") == 0.5
    assert cfg.positive("time.T", 60.0) == 60.0
    with pytest.raises(ConfigError):
        cfg.positive("kdvb.eps")
    with pytest.raises(ConfigError):
        cfg.require("shock.u_minus")
    with pytest.raises(ConfigError):
        cfg.get("not.a.key")
