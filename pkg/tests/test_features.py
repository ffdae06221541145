import math

import numpy as np
import pytest

from app.core.features import detect, detect_dog, detect_fast, detect_hessaff, frame_record, rank_frames
from app.core.features.fast import BASE_RADIUS, PYRAMID_FACTOR, intensity_centroid_angles
from app.core.features.frames import AffineFrame, filter_supported, reproject_frame
from app.core.features.scale_space import build_scale_space, octave_count
from app.core.imgproc import Image
from app.schemas.config import DetectorParams, DetectorTier


def _blob(size: int, sigma_x: float, sigma_y: float, center=None) -> Image:
    c = (size // 2, size // 2) if center is None else center
    ys, xs = np.mgrid[0:size, 0:size].astype(float)
    return Image(np.exp(-((xs - c[0]) ** 2 / (2 * sigma_x ** 2) + (ys - c[1]) ** 2 / (2 * sigma_y ** 2))))


def _frame(x, y, response=1.0, shape=None):
    return AffineFrame(center=(x, y), shape=np.eye(2) * 2.0 if shape is None else shape, response=response,
                       tier=DetectorTier.DOG)


# ------------------------------
# 帧工具
# ------------------------------
def test_frame_record_fields():
    rec = frame_record(AffineFrame(center=(1.5, 2.5), shape=[[1.0, 2.0], [3.0, 4.0]], response=0.7,
                                   tier=DetectorTier.HESSAFF, view_id=3))
    assert rec == {"x": 1.5, "y": 2.5, "a11": 1.0, "a12": 2.0, "a21": 3.0, "a22": 4.0,
                   "response": 0.7, "tier": "HessAff", "view_id": 3}


def test_rank_frames_orders_by_response_then_position():
    frames = [_frame(5, 1, 0.5), _frame(2, 1, 0.9), _frame(1, 1, 0.5), _frame(0, 0, 0.5)]
    ranked = rank_frames(frames, 3)
    assert [(f.x, f.y) for f in ranked] == [(2, 1), (0, 0), (1, 1)]


def test_frame_validity():
    assert _frame(0, 0).is_valid()
    assert not _frame(0, 0, shape=np.diag([1.0, -1.0])).is_valid()
    assert not _frame(0, 0, shape=np.diag([5.0, 0.2])).is_valid()


def test_filter_supported_drops_frames_near_border_and_mask():
    mask = np.ones((40, 40), dtype=bool)
    mask[:, 30:] = False
    img = Image(np.zeros((40, 40)), mask)
    frames = [_frame(20, 20), _frame(2, 20), _frame(27, 20), _frame(50, 20)]
    kept = filter_supported(frames, img, lambda f: 2.0 * f.scale)
    assert [(f.x, f.y) for f in kept] == [(20, 20)]


def test_reproject_frame_maps_center_and_shape():
    back_map = np.array([[2.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
    out = reproject_frame(_frame(10, 5), back_map, view_id=7, bounds=(100, 100))
    np.testing.assert_allclose(out.center, [21.0, 5.0])
    np.testing.assert_allclose(out.shape, [[4.0, 0.0], [0.0, 2.0]])
    assert out.view_id == 7
    assert reproject_frame(_frame(60, 5), back_map, view_id=7, bounds=(100, 100)) is None


# ------------------------------
# 尺度空间
# ------------------------------
def test_octave_count_keeps_smallest_octave_above_minimum():
    assert octave_count(256, 256) == 5
    assert octave_count(40, 300) == 2
    assert octave_count(10, 10) == 1


def test_scale_space_layout():
    octaves = build_scale_space(np.zeros((64, 64)))
    assert len(octaves) == octave_count(64, 64)
    assert octaves[0].gaussians.shape == (6, 64, 64)
    assert octaves[1].shape == (32, 32)
    assert octaves[1].step == 2.0
    assert octaves[0].sigmas[3] == pytest.approx(3.2)


# ------------------------------
# FAST
# ------------------------------
def test_intensity_centroid_points_up_the_gradient():
    ys, xs = np.mgrid[0:41, 0:41].astype(float)
    angle_x = intensity_centroid_angles(xs / 40.0, np.array([20]), np.array([20]))[0]
    angle_y = intensity_centroid_angles(ys / 40.0, np.array([20]), np.array([20]))[0]
    assert min(angle_x, 2.0 * math.pi - angle_x) < 1e-9
    assert angle_y == pytest.approx(math.pi / 2, abs=1e-9)


def test_fast_frames_are_similarities(texture):
    frames = detect_fast(texture)
    assert len(frames) > 50
    radii = {round(BASE_RADIUS * PYRAMID_FACTOR ** level, 6) for level in range(4)}
    for f in frames:
        assert f.tier == DetectorTier.FAST
        gram = f.shape.T @ f.shape
        r = math.sqrt(gram[0, 0])
        np.testing.assert_allclose(gram, r * r * np.eye(2), atol=1e-9)
        assert round(r, 6) in radii
        assert 0 <= f.x <= texture.width - 1 and 0 <= f.y <= texture.height - 1
    responses = [f.response for f in frames]
    assert responses == sorted(responses, reverse=True)


def test_fast_respects_max_features_and_tiny_images(texture):
    assert len(detect_fast(texture, DetectorParams(max_features=10))) == 10
    assert detect_fast(Image(np.zeros((10, 10)))) == []
    assert detect_fast(Image(np.full((64, 64), 0.5))) == []


# ------------------------------
# DoG
# ------------------------------
def test_dog_finds_isotropic_blob():
    frames = detect_dog(_blob(96, 5.0, 5.0))
    assert frames
    near = [f for f in frames if np.hypot(f.x - 48, f.y - 48) < 2.0]
    assert near
    best = near[0]
    assert 2.5 < best.scale < 12.0
    np.testing.assert_allclose(best.shape, best.scale * np.eye(2))


def test_dog_flat_and_small_images():
    assert detect_dog(Image(np.full((64, 64), 0.3))) == []
    assert detect_dog(Image(np.zeros((8, 8)))) == []


def test_dog_on_texture_is_sorted(texture):
    frames = detect_dog(texture)
    assert len(frames) > 20
    responses = [f.response for f in frames]
    assert responses == sorted(responses, reverse=True)
    assert all(f.tier == DetectorTier.DOG for f in frames)


# ------------------------------
# Hessian-Affine
# ------------------------------
def test_hessaff_adapts_to_elongated_blob():
    frames = detect_hessaff(_blob(128, 8.0, 4.0))
    near = [f for f in frames if np.hypot(f.x - 64, f.y - 64) < 3.0]
    assert near
    f = near[0]
    U, s, _ = np.linalg.svd(f.shape)
    assert s[0] / s[1] > 1.2
    assert abs(U[0, 0]) > 0.8


def test_hessaff_frames_are_well_conditioned(texture):
    frames = detect_hessaff(texture)
    assert frames
    for f in frames:
        assert np.linalg.det(f.shape) > 0
        assert f.axes[0] / f.axes[1] <= 20.0 + 1e-6
        assert f.tier == DetectorTier.HESSAFF


def test_detect_dispatches_by_tier(texture):
    assert all(f.tier == DetectorTier.FAST for f in detect(texture, DetectorTier.FAST))
    assert all(f.tier == DetectorTier.DOG for f in detect(texture, DetectorTier.DOG))
