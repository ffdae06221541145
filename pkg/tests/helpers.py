"""
测试辅助函数：合成纹理图、候选对应构造
"""

import numpy as np
from scipy import ndimage

from app.core.descriptors.base import DescribedFeature, Descriptor
from app.core.descriptors.rootsift import UNIFORM
from app.core.features.frames import AffineFrame
from app.core.imgproc import Image
from app.core.matching import TentativeCorrespondence
from app.schemas.config import DescriptorKind, DetectorTier


def make_texture(height: int, width: int, seed: int = 0) -> Image:
    """平滑噪声叠加随机高斯斑点，归一化到 [0,1]"""
    rng = np.random.default_rng(seed)
    data = ndimage.gaussian_filter(rng.standard_normal((height, width)), 2.0)
    yy, xx = np.mgrid[0:height, 0:width]
    for _ in range(max(8, height * width // 1500)):
        cx, cy = rng.uniform(0, width), rng.uniform(0, height)
        radius = rng.uniform(3.0, 12.0)
        data += rng.uniform(-1.0, 1.0) * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2.0 * radius ** 2))
    data = (data - data.min()) / (data.max() - data.min())
    return Image(data)


def make_feature(center, laf=None, kind: DescriptorKind = DescriptorKind.ROOT_SIFT) -> DescribedFeature:
    """方向为 0、形状即 LAF 的特征"""
    shape = 3.0 * np.eye(2) if laf is None else np.asarray(laf, dtype=float)
    data = UNIFORM.copy() if kind == DescriptorKind.ROOT_SIFT else np.zeros(32, dtype=np.uint8)
    frame = AffineFrame(center=center, shape=shape, response=1.0, tier=DetectorTier.DOG)
    return DescribedFeature(frame, Descriptor(kind, data), 0.0)


def make_tc(p1, p2, laf1=None, laf2=None, ratio: float = 0.5) -> TentativeCorrespondence:
    return TentativeCorrespondence(feat1=make_feature(p1, laf1), feat2=make_feature(p2, laf2),
                                   distance_ratio=ratio)


def apply_homography(H: np.ndarray, pts: np.ndarray) -> np.ndarray:
    ph = np.c_[pts, np.ones(len(pts))] @ np.asarray(H, dtype=float).T
    return ph[:, :2] / ph[:, 2:3]
