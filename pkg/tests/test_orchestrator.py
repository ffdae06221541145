import math

import numpy as np
import pytest

from app.core.errors import NoSolution
from app.core.geometry import rotation2d, tilt_of_latitude
from app.core.imgproc import warp_affine
from app.core.orchestrator import ModsMatcher, run_mods, run_single_config
from app.core.synth import synthesize_view
from app.schemas.config import SINGLE_DETECTOR_PRESETS, ModsConfig
from tests.helpers import apply_homography, make_texture

GRID = np.array([[x, y] for x in (30.0, 80.0, 130.0) for y in (30.0, 80.0, 130.0)])


def _first_steps(n: int) -> ModsConfig:
    return ModsConfig(steps=ModsConfig.default().steps[:n])


def _model(report) -> np.ndarray:
    return np.array(report.model).reshape(3, 3)


def test_self_match_solves_at_first_step(texture):
    report = run_mods(texture, texture)
    assert report.solved
    assert report.step == 1
    assert report.steps_executed == 1
    assert len(report.timings) == 1
    assert report.model_kind == "Homography"
    assert report.n_matches >= 15
    assert len(report.verified) == report.n_matches
    moved = apply_homography(_model(report), GRID)
    assert np.abs(moved - GRID).max() < 1.0
    assert set(report.stage_totals()) == {"synth", "detect", "describe", "match", "verify"}
    assert report.config["theta_m"] == 15


def test_unrelated_images_raise_no_solution(texture, other_texture):
    with pytest.raises(NoSolution) as info:
        run_mods(texture, other_texture, _first_steps(2))
    report = info.value.report
    assert not report.solved
    assert report.steps_executed == 2
    assert report.n_matches < 15
    assert [t.step for t in report.timings] == [1, 2]


def test_stage_times_add_up_to_step_time(texture, other_texture):
    try:
        report = run_mods(texture, other_texture, _first_steps(2))
    except NoSolution as e:
        report = e.report
    for timing in report.timings:
        assert sum(timing.stage_ms().values()) == pytest.approx(timing.ms_total, rel=0.05)
    assert sum(report.stage_totals().values()) == pytest.approx(report.ms_total, rel=0.05)


def test_same_seed_gives_identical_reports(texture):
    a = run_mods(texture, texture, seed=3)
    b = run_mods(texture, texture, seed=3)
    assert a.model == b.model
    assert a.correspondences == b.correspondences


def test_thread_count_does_not_change_result():
    img1 = make_texture(120, 120, seed=4)
    img2 = synthesize_view(img1, (1.0, 2.0, 0.0)).image
    cfg = _first_steps(2)
    single = _report_or_best(img1, img2, cfg, threads=1)
    multi = _report_or_best(img1, img2, cfg, threads=3)
    assert single.model == multi.model
    assert single.correspondences == multi.correspondences
    assert [t.views for t in single.timings] == [t.views for t in multi.timings]


def _report_or_best(img1, img2, cfg, threads):
    try:
        return run_mods(img1, img2, cfg, threads=threads)
    except NoSolution as e:
        return e.report


def test_seed_overrides_ransac_config():
    matcher = ModsMatcher(_first_steps(1), seed=9)
    assert matcher.ransac.rng_seed == 9
    assert matcher.config.ransac.rng_seed == 0


def test_single_config_does_not_escalate(texture):
    report = run_single_config(texture, texture, SINGLE_DETECTOR_PRESETS["DoG-plain"])
    assert report.solved
    assert report.steps_executed == 1
    assert report.config["s_max"] == 1


@pytest.mark.slow
def test_rotated_copy_solved_by_binary_tier():
    img = make_texture(200, 200, seed=6)
    T = np.zeros((2, 3))
    T[:, :2] = rotation2d(math.radians(60.0))
    rotated, inverse = warp_affine(img, T)
    report = run_mods(img, rotated, _first_steps(1))
    assert report.solved
    # 模型把图1的点送到扭曲图中同一内容的位置
    forward = np.linalg.inv(np.vstack([inverse, [0.0, 0.0, 1.0]]))
    pts = np.array([[70.0, 70.0], [130.0, 90.0], [100.0, 130.0]])
    expected = apply_homography(forward, pts)
    assert np.abs(apply_homography(_model(report), pts) - expected).max() < 2.0


@pytest.mark.slow
def test_strong_tilt_needs_view_synthesis():
    img = make_texture(320, 320, seed=3)
    t = tilt_of_latitude(math.radians(80.0))
    tilted = synthesize_view(img, (1.0, t, 0.0)).image
    report = run_mods(img, tilted)
    assert report.solved
    assert report.step >= 2
    assert report.timings[0].inliers < 15
    expected = apply_homography(np.diag([1.0 / t, 1.0, 1.0]), GRID)
    assert np.abs(apply_homography(_model(report), GRID) - expected).max() < 3.0


@pytest.mark.slow
def test_random_pairs_are_not_falsely_solved():
    solved = 0
    for seed in range(100):
        img1 = make_texture(80, 80, seed=1000 + 2 * seed)
        img2 = make_texture(80, 80, seed=1001 + 2 * seed)
        try:
            run_mods(img1, img2, _first_steps(2))
            solved += 1
        except NoSolution:
            pass
    assert solved == 0
