import numpy as np
import pytest

from app.core.geometry import apply_affine
from app.core.imgproc import sample_bilinear
from app.core.synth import enumerate_views, iter_views, synthesize, synthesize_view
from app.schemas.config import SynthesisConfig
from tests.helpers import make_texture


def test_enumerate_identity_only():
    assert enumerate_views(SynthesisConfig()) == [(1.0, 1.0, 0.0)]


def test_enumerate_counts_longitudes_per_tilt():
    views = enumerate_views(SynthesisConfig(tilts=[1.0, 5.0, 9.0], delta_phi_base=360.0))
    # t=5: Δφ=72° → 5 个；t=9: Δφ=40° → 9 个
    assert len(views) == 1 + 5 + 9
    assert views[0] == (1.0, 1.0, 0.0)
    t5 = [v[2] for v in views if v[1] == 5.0]
    assert t5 == pytest.approx([0.0, 72.0, 144.0, 216.0, 288.0])


def test_enumerate_orders_scales_and_tilts_ascending():
    views = enumerate_views(SynthesisConfig(scales=[1.0, 0.25], tilts=[4.0, 1.0], delta_phi_base=120.0))
    assert [v[0] for v in views] == sorted(v[0] for v in views)
    assert views[0] == (0.25, 1.0, 0.0)
    assert sum(1 for v in views if v[0] == 1.0 and v[1] == 4.0) == 12


def test_identity_view_is_exact_copy(texture):
    view = synthesize_view(texture, (1.0, 1.0, 0.0))
    np.testing.assert_array_equal(view.image.data, texture.data)
    np.testing.assert_allclose(view.back_map, [[1, 0, 0], [0, 1, 0]])
    assert view.source_size == (texture.width, texture.height)


def test_tilted_view_canvas_and_back_map(texture):
    view = synthesize_view(texture, (1.0, 2.0, 0.0))
    assert view.image.width == 80
    assert view.image.height == texture.height
    # 视图像素 (x, y) 对应原图 (2x, y)
    np.testing.assert_allclose(apply_affine(view.back_map, np.array([[10.0, 7.0]])), [[20.0, 7.0]])


def test_back_map_hits_same_content_after_rotation():
    img = make_texture(120, 120, seed=5)
    view = synthesize_view(img, (1.0, 1.0, 30.0))
    row, col = view.image.height // 2, view.image.width // 2
    sx, sy = apply_affine(view.back_map, np.array([[float(col), float(row)]]))[0]
    expected = sample_bilinear(img.data, np.array([sx]), np.array([sy]))[0]
    assert view.image.data[row, col] == pytest.approx(expected, abs=1e-9)

    center = np.array([[60.0, 60.0]])
    np.testing.assert_allclose(apply_affine(view.back_map, apply_affine(view.forward_map, center)), center,
                               atol=1e-9)


def test_scaled_view_back_map(texture):
    view = synthesize_view(texture, (0.5, 1.0, 0.0))
    assert (view.image.width, view.image.height) == (80, 80)
    np.testing.assert_allclose(apply_affine(view.back_map, np.array([[3.0, 4.0]])), [[6.0, 8.0]])


def test_synthesize_matches_enumeration_and_assigns_ids(texture):
    cfg = SynthesisConfig(tilts=[1.0, 4.0], delta_phi_base=180.0)
    views = synthesize(texture, cfg)
    assert [v.params for v in views] == enumerate_views(cfg)
    assert [v.view_id for v in views] == list(range(len(views)))
    ids = [v.view_id for v in iter_views(texture, cfg, first_view_id=10)]
    assert ids[0] == 10


def test_tilted_view_is_blurred_along_compression(texture):
    view = synthesize_view(texture, (1.0, 4.0, 0.0))
    valid = view.image.valid_mask()
    assert valid.mean() > 0.9
    assert np.all(view.image.data[valid] >= -1e-9)
    assert np.all(view.image.data[valid] <= 1.0 + 1e-9)
