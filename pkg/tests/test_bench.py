import json
import math

import numpy as np
import pandas as pd
import pytest

from app.core.bench.difficulty import classify_difficulty, difficulty_table
from app.core.bench.overlay import render_overlay
from app.core.bench.runner import (
    CSV_COLUMNS,
    load_pair_criteria,
    run_pairs_bench,
    run_warp_bench,
    score_report_file,
    write_json_atomic,
)
from app.core.bench.scoring import (
    GroundTruthKind,
    SolveCriteria,
    SolveMode,
    epipolar_errors,
    score_correspondences,
    transfer_errors,
)
from app.core.bench.warp import WarpCase, make_warp_series, warped_width
from app.core.errors import DomainError, ImageTooSmall, MissingGroundTruth, NoSolution
from app.core.imgproc import Image, save_image
from app.core.orchestrator import run_mods
from app.schemas.config import SINGLE_DETECTOR_PRESETS, ModsConfig
from app.schemas.report import CorrespondenceRecord, MatchReport
from tests.helpers import make_texture


def _record(x1, y1, x2, y2, laf=True) -> CorrespondenceRecord:
    return CorrespondenceRecord(x1=x1, y1=y1, x2=x2, y2=y2, laf_consistent=laf)


def _fast_plan() -> ModsConfig:
    return ModsConfig(steps=ModsConfig.default().steps[:1])


# ------------------------------
# 难度分级
# ------------------------------
@pytest.mark.parametrize("fraction,label", [
    (1.0, "hard"),
    (0.99, "hard"),
    (0.95, "medium"),
    (0.90, "medium"),
    (0.7, "easy"),
    (0.5, "easy"),
    (0.49, "unsolved"),
    (0.0, "unsolved"),
])
def test_classify_difficulty(fraction, label):
    assert classify_difficulty(fraction) == label


def test_classify_difficulty_rejects_out_of_range():
    with pytest.raises(DomainError):
        classify_difficulty(1.2)
    with pytest.raises(DomainError):
        classify_difficulty(-0.1)


def test_difficulty_table_groups_by_config_and_latitude():
    results = pd.DataFrame({
        "config_id": ["a", "a", "a", "a", "b", "b"],
        "latitude": [0.0, 0.0, 60.0, 60.0, 0.0, 0.0],
        "solved": [True, True, True, False, False, False],
    })
    table = difficulty_table(results)
    assert list(table.columns) == ["config_id", "latitude", "fraction_solved", "label"]
    assert table["fraction_solved"].tolist() == [1.0, 0.5, 0.0]
    assert table["label"].tolist() == ["hard", "easy", "unsolved"]
    assert difficulty_table(results.iloc[:0]).empty


# ------------------------------
# 叠加图
# ------------------------------
def test_overlay_canvas_and_line_colors():
    img1 = Image(np.zeros((30, 40)))
    img2 = Image(np.zeros((20, 50)))
    report = MatchReport(correspondences=[
        _record(5.0, 10.0, 10.0, 10.0, laf=True),
        _record(5.0, 3.0, 20.0, 3.0, laf=False),
    ])
    out = render_overlay(img1, img2, report)
    assert out.data.shape == (30, 90, 3)
    np.testing.assert_allclose(out.data[10, 20], [0.0, 1.0, 0.0])
    np.testing.assert_allclose(out.data[3, 30], [1.0, 0.0, 0.0])
    assert out.data[25, 20].sum() == 0.0


# ------------------------------
# 评分
# ------------------------------
def test_transfer_and_epipolar_errors():
    H = np.diag([2.0, 2.0, 1.0])
    x1 = np.array([[1.0, 1.0]])
    assert transfer_errors(H, x1, np.array([[2.0, 2.0]]))[0] == pytest.approx(0.0)
    # 前向偏 1 像素，后向偏 0.5 像素
    assert transfer_errors(H, x1, np.array([[3.0, 2.0]]))[0] == pytest.approx(0.75)
    F = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    errors = epipolar_errors(F, np.array([[0.0, 0.0]]), np.array([[0.0, 2.0]]))
    assert errors[0] == pytest.approx(math.sqrt(8.0))
    assert math.isinf(epipolar_errors(np.zeros((3, 3)), x1, x1)[0])


def test_nine_correct_among_wrong_is_not_solved():
    rng = np.random.default_rng(0)
    good = [_record(x, y, x, y) for x, y in rng.uniform(0, 100, (9, 2))]
    bad = [_record(x, y, x + 30.0, y) for x, y in rng.uniform(0, 100, (100, 2))]
    crit = SolveCriteria.real_homography(np.eye(3))
    score = score_correspondences(MatchReport(correspondences=good + bad), crit)
    assert score.correct_count == 9
    assert score.total == 109
    assert not score.solved
    extra = _record(1.0, 2.0, 1.0, 2.0)
    assert score_correspondences(MatchReport(correspondences=good + bad + [extra]), crit).solved


def test_score_ignores_laf_discarded_records():
    records = [_record(float(i), 0.0, float(i), 0.0, laf=i % 2 == 0) for i in range(20)]
    score = score_correspondences(MatchReport(correspondences=records), SolveCriteria.real_homography(np.eye(3)))
    assert score.total == 10
    assert score.solved


def test_median_epipolar_mode():
    F = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    crit = SolveCriteria.epipolar(F)
    assert crit.mode == SolveMode.MEDIAN_EPIPOLAR
    near = [_record(float(i), 5.0, float(i) + 40.0, 6.0) for i in range(5)]
    assert score_correspondences(MatchReport(correspondences=near), crit).solved
    far = [_record(float(i), 5.0, float(i), 50.0) for i in range(5)]
    assert not score_correspondences(MatchReport(correspondences=far), crit).solved


def test_score_edge_cases():
    with pytest.raises(MissingGroundTruth):
        score_correspondences(MatchReport(), SolveCriteria())
    score = score_correspondences(MatchReport(), SolveCriteria.real_homography(np.eye(3)))
    assert not score.solved
    assert score.median_error is None


# ------------------------------
# 合成扭曲
# ------------------------------
def test_warp_series_widths_and_ground_truth():
    img = make_texture(64, 100, seed=5)
    series = make_warp_series(img, (0.0, 60.0))
    assert [c.warped.width for c in series] == [100, 50]
    assert series[1].tilt == pytest.approx(2.0)
    np.testing.assert_allclose(series[1].affine, [[0.5, 0.0, 0.0], [0.0, 1.0, 0.0]], atol=1e-12)
    assert series[1].homography.shape == (3, 3)
    assert warped_width(100, 2.0) == 50


def test_warp_series_rejects_narrow_images():
    with pytest.raises(ImageTooSmall):
        make_warp_series(make_texture(64, 100, seed=5), (85.0,))


# ------------------------------
# 评测运行
# ------------------------------
def test_warp_bench_writes_csv_and_difficulty(tmp_path):
    images = tmp_path / "images"
    images.mkdir()
    save_image(str(images / "tex.png"), make_texture(96, 96, seed=8))
    (images / "notes.txt").write_text("skip", encoding="utf-8")
    out = tmp_path / "out" / "warp.csv"

    results = run_warp_bench(str(images), {"fast": _fast_plan()}, str(out), latitudes=(0.0, 60.0))
    assert len(results) == 2
    written = pd.read_csv(out)
    assert list(written.columns) == CSV_COLUMNS
    assert written["pair_id"].tolist() == ["tex@0", "tex@60"]
    difficulty = pd.read_csv(tmp_path / "out" / "warp_difficulty.csv")
    assert list(difficulty.columns) == ["config_id", "latitude", "fraction_solved", "label"]
    assert len(list((tmp_path / "out" / "warp_reports").glob("*.json"))) == 2


def test_load_pair_criteria(tmp_path):
    np.savetxt(tmp_path / "H.txt", np.eye(3))
    crit = load_pair_criteria(tmp_path)
    assert crit.gt_kind == GroundTruthKind.HOMOGRAPHY
    assert crit.min_correct == 10

    cam_dir = tmp_path / "cam"
    cam_dir.mkdir()
    camera = dict(f=50.0, FR_X=36.0, FR_Y=24.0, m=640.0, n=480.0, r=800.0, phi=math.radians(10.0))
    (cam_dir / "camera.json").write_text(json.dumps(camera), encoding="utf-8")
    crit = load_pair_criteria(cam_dir)
    assert crit.mode == SolveMode.MEDIAN_EPIPOLAR
    assert np.linalg.matrix_rank(np.asarray(crit.gt), tol=1e-9) == 2

    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(MissingGroundTruth):
        load_pair_criteria(empty)


def test_pairs_bench_skips_pairs_without_ground_truth(tmp_path):
    img = make_texture(96, 96, seed=9)
    for name in ("p1", "p2"):
        pair = tmp_path / "pairs" / name
        pair.mkdir(parents=True)
        save_image(str(pair / "img1.png"), img)
        save_image(str(pair / "img2.png"), img)
    np.savetxt(tmp_path / "pairs" / "p1" / "H.txt", np.eye(3))
    out = tmp_path / "pairs.csv"

    results = run_pairs_bench(str(tmp_path / "pairs"), _fast_plan(), str(out))
    assert results["pair_id"].tolist() == ["p1"]
    written = pd.read_csv(out)
    assert list(written.columns) == CSV_COLUMNS + ["tau"]
    assert written["tau"].iloc[0] == pytest.approx(1.0)


def test_score_report_file(tmp_path):
    records = [_record(float(i), 1.0, float(i), 1.0) for i in range(12)]
    path = tmp_path / "case.json"
    write_json_atomic(str(path), {"report": MatchReport(correspondences=records).model_dump(mode="json")})
    np.savetxt(tmp_path / "H.txt", np.eye(3))
    assert score_report_file(str(path), str(tmp_path / "H.txt")).solved
    assert not score_report_file(str(path), str(tmp_path / "H.txt"), min_correct=20).solved
    assert not (tmp_path / "case.json.tmp").exists()


def _solved_on_warp(case: WarpCase, preset: str) -> bool:
    try:
        report = run_mods(case.source, case.warped, ModsConfig.single(SINGLE_DETECTOR_PRESETS[preset]))
    except NoSolution as e:
        report = e.report
    return score_correspondences(report, SolveCriteria.synthetic(case.affine)).solved


@pytest.mark.slow
def test_view_synthesis_extends_solvable_latitudes():
    plain = {}
    synth = {}
    for seed in range(10):
        img = make_texture(256, 256, seed=40 + seed)
        for case in make_warp_series(img, (0.0, 20.0, 40.0, 60.0, 65.0, 70.0, 75.0, 80.0)):
            if case.latitude <= 40.0 or case.latitude >= 75.0:
                plain.setdefault(case.latitude, []).append(_solved_on_warp(case, "DoG-plain"))
            if case.latitude <= 75.0:
                synth.setdefault(case.latitude, []).append(_solved_on_warp(case, "DoG-easy"))

    assert all(all(plain[theta]) for theta in (0.0, 20.0, 40.0))
    assert not any(plain[75.0] + plain[80.0])
    outcomes = [ok for runs in synth.values() for ok in runs]
    assert sum(outcomes) >= 0.9 * len(outcomes)
