from __future__ import annotations

import json

import pytest

from traveling_wave_lab import pipeline


def test_closed_form_items_pass(tmp_path, capsys) -> None:
    code = pipeline.main(["--out", str(tmp_path), "--items", "2,3,4"])
    assert code == 0
    report = json.loads((tmp_path / "acceptance.json").read_text())
    assert report["passed"]
    assert [item["id"] for item in report["items"]] == [2, 3, 4]
    assert all(item["passed"] for item in report["items"])
    assert json.loads(capsys.readouterr().out) == report


def test_unknown_item_exits_2(tmp_path, capsys) -> None:
    assert pipeline.main(["--out", str(tmp_path), "--items", "2,42"]) == 2
    err = json.loads(capsys.readouterr().out)
    assert err["reason"]["items"] == [42]
    assert not (tmp_path / "acceptance.json").exists()


@pytest.mark.slow
def test_full_acceptance_run(tmp_path) -> None:
    assert pipeline.main(["--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "acceptance.json").read_text())
    assert len(report["items"]) == len(pipeline.ITEMS)
