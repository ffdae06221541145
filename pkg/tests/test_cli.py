import json

import numpy as np
import pytest

from app.cli import main
from app.core.imgproc import load_image, save_image
from app.schemas.report import CorrespondenceRecord, MatchReport


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ("MODS_CONFIG", "MODS_SEED", "MODS_THREADS"):
        monkeypatch.delenv(name, raising=False)


def test_config_prints_default_plan(capsys):
    assert main(["config"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["steps"]) == 7
    assert data["theta_m"] == 15


def test_match_writes_report_and_overlay(tmp_path, texture):
    path = tmp_path / "tex.png"
    save_image(str(path), texture)
    out = tmp_path / "report.json"
    overlay = tmp_path / "overlay.png"
    code = main(["match", str(path), str(path), "--preset", "DoG-plain", "--out", str(out),
                 "--overlay", str(overlay), "--seed", "2"])
    assert code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["solved"] is True
    assert report["n_matches"] >= 15
    drawn = load_image(str(overlay))
    assert (drawn.height, drawn.width) == (texture.height, 2 * texture.width)


def test_match_prints_unsolved_report(tmp_path, capsys, texture, other_texture):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    save_image(str(a), texture)
    save_image(str(b), other_texture)
    assert main(["match", str(a), str(b), "--preset", "DoG-plain"]) == 1
    assert json.loads(capsys.readouterr().out)["solved"] is False


def test_missing_image_exits_with_error(tmp_path):
    assert main(["match", str(tmp_path / "none.png"), str(tmp_path / "none.png")]) == 2


def test_bench_score(tmp_path, capsys):
    records = [CorrespondenceRecord(x1=float(i), y1=0.0, x2=float(i) + 1.0, y2=0.0) for i in range(12)]
    report = tmp_path / "report.json"
    report.write_text(MatchReport(correspondences=records).model_dump_json(), encoding="utf-8")
    gt = tmp_path / "H.txt"
    H = np.eye(3)
    H[0, 2] = 1.0
    np.savetxt(gt, H)
    assert main(["bench", "score", str(report), "--gt", str(gt)]) == 0
    score = json.loads(capsys.readouterr().out)
    assert score["correct_count"] == 12
    assert main(["bench", "score", str(report), "--gt", str(gt), "--min-correct", "13"]) == 1
