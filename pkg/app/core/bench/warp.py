"""
合成扭曲数据集

按纬度列表把源图水平压缩 t = 1/cos θ 倍，真值仿射直接由参数给出而不是事后估计。
"""

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from app.core.errors import ImageTooSmall
from app.core.geometry import tilt_of_latitude
from app.core.imgproc import SIGMA_BASE, Image
from app.core.synth import synthesize_view

LATITUDES = (0.0, 20.0, 40.0, 60.0, 65.0, 70.0, 75.0, 80.0, 85.0)
MIN_WARPED_WIDTH = 32


@dataclass
class WarpCase:
    """一个扭曲样本：affine 为 源图坐标 → 扭曲图坐标 的 2×3 真值"""
    source: Image
    latitude: float
    affine: np.ndarray
    warped: Image

    @property
    def tilt(self) -> float:
        return tilt_of_latitude(math.radians(self.latitude))

    @property
    def homography(self) -> np.ndarray:
        H = np.eye(3)
        H[:2, :] = self.affine
        return H


def warped_width(width: int, tilt: float) -> int:
    """与合成视图相同的画布规则：⌊(W-1)/t⌋ + 1"""
    return int(math.floor((width - 1) / tilt + 1e-9)) + 1


def make_warp_series(img: Image, latitudes: Sequence[float] = LATITUDES,
                     sigma_base: float = SIGMA_BASE) -> List[WarpCase]:
    """
    生成一幅源图的倾斜序列

    Args:
        img: 源图
        latitudes: 纬度列表（度）
        sigma_base: 抗混叠基础 σ

    Returns:
        每个纬度一个 WarpCase

    Raises:
        ImageTooSmall: 最大倾斜下扭曲图宽度不足 32 像素
    """
    tilts = [tilt_of_latitude(math.radians(theta)) for theta in latitudes]
    if tilts and warped_width(img.width, max(tilts)) < MIN_WARPED_WIDTH:
        raise ImageTooSmall(f"宽度 {img.width} 在 t={max(tilts):.2f} 下不足 {MIN_WARPED_WIDTH} 像素")

    cases = []
    for theta, t in zip(latitudes, tilts):
        view = synthesize_view(img, (1.0, t, 0.0), sigma_base)
        cases.append(WarpCase(source=img, latitude=float(theta), affine=view.forward_map, warped=view.image))
    return cases
