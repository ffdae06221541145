import math

import numpy as np
import pytest

from app.core.errors import InsufficientCorrespondences, NoModel
from app.core.geometry import GeometryModel, ModelKind, normalize_model, rotation2d, skew
from app.core.verify import (
    HOMOGRAPHY_SOLVER,
    auto_model,
    estimate_fundamental,
    estimate_homography,
    extremal_points,
    laf_check,
    laf_errors,
    required_iterations,
)
from app.core.verify.ransac import _local_optimize, _score
from app.core.verify.solvers import dlt_homography, homography_errors, sampson_errors, seven_point
from app.schemas.config import RansacConfig
from tests.helpers import apply_homography, make_tc

H_TRUE = np.array([[1.1, 0.05, 10.0], [-0.03, 0.95, 5.0], [1e-4, 2e-4, 1.0]])
K = np.array([[500.0, 0.0, 320.0], [0.0, 500.0, 240.0], [0.0, 0.0, 1.0]])


def _rot_y(deg: float) -> np.ndarray:
    a = math.radians(deg)
    return np.array([[math.cos(a), 0.0, math.sin(a)], [0.0, 1.0, 0.0], [-math.sin(a), 0.0, math.cos(a)]])


R_TRUE = _rot_y(8.0)
T_TRUE = np.array([-1.5, 0.2, 0.3])
F_TRUE = np.linalg.inv(K).T @ skew(T_TRUE) @ R_TRUE @ np.linalg.inv(K)


def _project(X: np.ndarray):
    """两个相机下的投影：P1 = K[I|0]，P2 = K[R|t]"""
    x1 = X @ K.T
    x2 = (X @ R_TRUE.T + T_TRUE) @ K.T
    return x1[:, :2] / x1[:, 2:], x2[:, :2] / x2[:, 2:]


def _scene_points(rng, n: int) -> np.ndarray:
    return np.c_[rng.uniform(-2, 2, n), rng.uniform(-1.5, 1.5, n), rng.uniform(6, 10, n)]


def _tcs(p1, p2):
    return [make_tc(a, b) for a, b in zip(p1, p2)]


# ------------------------------
# 单应
# ------------------------------
def test_four_exact_points_recover_homography():
    p1 = np.array([[0.0, 0.0], [100.0, 0.0], [100.0, 80.0], [10.0, 90.0]])
    model = estimate_homography(_tcs(p1, apply_homography(H_TRUE, p1)))
    assert model.kind == ModelKind.HOMOGRAPHY
    assert model.inliers == [0, 1, 2, 3]
    np.testing.assert_allclose(model.matrix, normalize_model(H_TRUE), atol=1e-8)


def test_planted_homography_inliers_recovered():
    rng = np.random.default_rng(0)
    p1 = rng.uniform(0, 300, (100, 2))
    clean = apply_homography(H_TRUE, p1)
    p2 = clean + rng.uniform(-0.5, 0.5, clean.shape)
    p2[70:] = rng.uniform(0, 300, (30, 2))
    model = estimate_homography(_tcs(p1, p2), RansacConfig(rng_seed=0))
    assert len(set(model.inliers) & set(range(70))) >= 63
    transfer = np.linalg.norm(apply_homography(model.matrix, p1[:70]) - clean[:70], axis=1)
    assert transfer.max() <= 2.0
    assert len(model.residuals) == len(model.inliers)
    assert max(model.residuals) <= 2.0


def test_collinear_points_have_no_homography():
    xs = np.linspace(0, 100, 12)
    p1 = np.c_[xs, 2.0 * xs + 1.0]
    with pytest.raises(NoModel):
        estimate_homography(_tcs(p1, p1 + 5.0))


def test_too_few_correspondences():
    p = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(InsufficientCorrespondences):
        estimate_homography(_tcs(p, p))
    with pytest.raises(InsufficientCorrespondences):
        auto_model(_tcs(p, p))


def test_dlt_rejects_degenerate_minimal_sample():
    p = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.0, 5.0]])
    assert dlt_homography(p, p) is None


def test_homography_errors_rms_of_transfers():
    H = np.array([[1.0, 0.0, 3.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    err = homography_errors(H, np.array([[0.0, 0.0]]), np.array([[0.0, 4.0]]))
    # 前向 |(3,0)-(0,4)| = 5，后向 |(-3,4)-(0,0)| = 5
    assert err[0] == pytest.approx(5.0)
    assert np.isinf(homography_errors(np.zeros((3, 3)), np.zeros((1, 2)), np.zeros((1, 2)))[0])


# ------------------------------
# 基础矩阵
# ------------------------------
def test_eight_exact_projections_satisfy_epipolar_constraint():
    rng = np.random.default_rng(1)
    p1, p2 = _project(_scene_points(rng, 8))
    model = estimate_fundamental(_tcs(p1, p2))
    assert model.kind == ModelKind.FUNDAMENTAL
    assert len(model.inliers) == 8
    assert sampson_errors(model.matrix, p1, p2).max() < 1e-6
    np.testing.assert_allclose(model.matrix, normalize_model(F_TRUE, ModelKind.FUNDAMENTAL), atol=1e-6)
    assert np.linalg.svd(model.matrix, compute_uv=False)[2] < 1e-12


def test_seven_point_solutions_are_rank_two():
    rng = np.random.default_rng(2)
    p1, p2 = _project(_scene_points(rng, 7))
    models = seven_point(p1, p2)
    assert 1 <= len(models) <= 3
    for F in models:
        assert np.linalg.svd(F, compute_uv=False)[2] < 1e-9
        assert sampson_errors(F, p1, p2).max() < 1e-6
    assert any(np.allclose(normalize_model(F, ModelKind.FUNDAMENTAL),
                           normalize_model(F_TRUE, ModelKind.FUNDAMENTAL), atol=1e-6) for F in models)


def test_planted_fundamental_inliers_recovered():
    rng = np.random.default_rng(3)
    p1, p2 = _project(_scene_points(rng, 100))
    p2 = p2 + rng.normal(0.0, 0.3, p2.shape)
    p2[60:] = np.c_[rng.uniform(0, 640, 40), rng.uniform(0, 480, 40)]
    model = estimate_fundamental(_tcs(p1, p2), RansacConfig(rng_seed=5))
    assert len(set(model.inliers) & set(range(60))) >= 54


def test_ransac_is_deterministic_for_fixed_seed():
    rng = np.random.default_rng(4)
    p1, p2 = _project(_scene_points(rng, 60))
    p2[40:] = np.c_[rng.uniform(0, 640, 20), rng.uniform(0, 480, 20)]
    tcs = _tcs(p1, p2)
    a = estimate_fundamental(tcs, RansacConfig(rng_seed=11))
    b = estimate_fundamental(tcs, RansacConfig(rng_seed=11))
    np.testing.assert_array_equal(a.matrix, b.matrix)
    assert a.inliers == b.inliers


# ------------------------------
# 迭代次数与局部优化
# ------------------------------
def test_required_iterations():
    expected = math.ceil(math.log(0.01) / math.log(1.0 - 0.5 ** 4))
    assert required_iterations(0.5, 4, 0.99, 10000) == expected
    assert required_iterations(1.0, 7, 0.999, 10000) == 1
    assert required_iterations(0.0, 7, 0.999, 500) == 500
    assert required_iterations(0.01, 7, 0.999, 500) == 500


def test_local_optimization_never_loses_support():
    rng = np.random.default_rng(6)
    p1 = rng.uniform(0, 300, (80, 2))
    p2 = apply_homography(H_TRUE, p1) + rng.uniform(-0.4, 0.4, (80, 2))
    rough = H_TRUE + np.array([[0.004, 0.0, 0.8], [0.0, -0.003, 0.5], [0.0, 0.0, 0.0]])
    start = _score(HOMOGRAPHY_SOLVER, rough, p1, p2, 2.0)
    refined = _local_optimize(HOMOGRAPHY_SOLVER, start, p1, p2, 2.0, rounds=3)
    assert refined.count >= start.count
    assert refined.count == 80


# ------------------------------
# 模型自动选择
# ------------------------------
def test_planar_scene_returns_homography():
    rng = np.random.default_rng(7)
    p1 = rng.uniform(0, 300, (100, 2))
    p2 = apply_homography(H_TRUE, p1)
    p2[80:] = rng.uniform(0, 300, (20, 2))
    model = auto_model(_tcs(p1, p2))
    assert model.kind == ModelKind.HOMOGRAPHY
    assert set(range(80)) <= set(model.inliers)


def test_two_planes_with_baseline_return_fundamental():
    rng = np.random.default_rng(8)
    xa = np.c_[rng.uniform(-2, 2, 50), rng.uniform(-1.5, 1.5, 50)]
    xb = np.c_[rng.uniform(-2, 2, 50), rng.uniform(-1.5, 1.5, 50)]
    plane_a = np.c_[xa, np.full(50, 7.0)]
    plane_b = np.c_[xb, 9.0 + 0.5 * xb[:, 0]]
    p1, p2 = _project(np.vstack([plane_a, plane_b]))
    model = auto_model(_tcs(p1, p2))
    assert model.kind == ModelKind.FUNDAMENTAL
    assert len(model.inliers) >= 95


def test_few_correspondences_fall_back_to_homography():
    p1 = np.array([[0.0, 0.0], [100.0, 0.0], [100.0, 80.0], [10.0, 90.0], [50.0, 40.0]])
    model = auto_model(_tcs(p1, apply_homography(H_TRUE, p1)))
    assert model.kind == ModelKind.HOMOGRAPHY
    assert model.inliers == [0, 1, 2, 3, 4]


# ------------------------------
# LAF 检查
# ------------------------------
def test_extremal_points_lie_on_axes():
    pts = extremal_points(np.array([10.0, 20.0]), np.diag([3.0, 1.0]))
    np.testing.assert_allclose(np.linalg.norm(pts - [10.0, 20.0], axis=1), [3.0, 1.0])


def _affine_model(inliers):
    A = np.array([[1.2, 0.3, 5.0], [-0.1, 0.9, 3.0], [0.0, 0.0, 1.0]])
    return A, GeometryModel(kind=ModelKind.HOMOGRAPHY, matrix=A, inliers=inliers)


def test_laf_check_keeps_exactly_mapped_frames():
    A, model = _affine_model([0, 1, 2])
    rng = np.random.default_rng(9)
    tcs = []
    for _ in range(3):
        c1 = rng.uniform(0, 100, 2)
        laf1 = np.array([[4.0, 1.0], [-0.5, 2.0]])
        tcs.append(make_tc(c1, A[:2, :2] @ c1 + A[:2, 2], laf1, A[:2, :2] @ laf1))
    result = laf_check(tcs, model, RansacConfig())
    assert result.inliers_after_laf == [0, 1, 2]
    assert result.discarded_by_laf == 0
    assert laf_errors(tcs, model).max() < 1e-9


def test_laf_check_discards_rotated_frame():
    identity = GeometryModel(kind=ModelKind.HOMOGRAPHY, matrix=np.eye(3), inliers=[0, 1, 2])
    laf = np.diag([6.0, 2.0])
    tcs = [
        make_tc((50, 50), (50, 50), laf, laf),
        make_tc((80, 20), (80, 20), laf, rotation2d(math.pi / 2) @ laf),
        make_tc((20, 80), (20, 80), 3.0 * np.eye(2), 3.0 * np.eye(2)),
    ]
    result = laf_check(tcs, identity)
    assert result.inliers_after_laf == [0, 2]
    assert result.discarded_by_laf == 1
    assert result.n_matches == 2


def test_laf_check_only_considers_model_inliers():
    identity = GeometryModel(kind=ModelKind.HOMOGRAPHY, matrix=np.eye(3), inliers=[1])
    tcs = [make_tc((0, 0), (0, 0)), make_tc((5, 5), (5, 5))]
    assert laf_check(tcs, identity).inliers_after_laf == [1]
    empty = GeometryModel(kind=ModelKind.HOMOGRAPHY, matrix=np.eye(3), inliers=[])
    assert laf_check(tcs, empty).n_matches == 0


def test_laf_check_with_fundamental_model():
    # 水平平移：极线为水平线
    F = GeometryModel(kind=ModelKind.FUNDAMENTAL, matrix=skew([1.0, 0.0, 0.0]), inliers=[0, 1])
    laf = np.diag([6.0, 2.0])
    tcs = [
        make_tc((50, 50), (80, 50), laf, laf),
        make_tc((20, 30), (60, 30), laf, rotation2d(math.pi / 2) @ laf),
    ]
    result = laf_check(tcs, F, RansacConfig(f_threshold_px=1.0, laf_factor=2.0))
    assert result.inliers_after_laf == [0]
    assert result.discarded_by_laf == 1
