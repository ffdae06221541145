"""
视图合成模块

按 (尺度集合, 倾斜集合, Δφbase) 生成一幅图像的合成视图：
先做尺度合成（σ = σbase·S 的高斯尺度空间 + 下采样），再按经度 φ 旋转，
沿旋转后的水平方向做 σ = t·σbase 的抗混叠模糊，最后水平压缩 t 倍。
旋转与压缩合并为一次重采样。
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from app.core.geometry import compose_affine_maps, invert_affine, rotation2d
from app.core.imgproc import Image, downsample, oriented_gaussian_blur, scale_back_map, warp_affine
from app.core.logging_utils import log_debug
from app.schemas.config import SynthesisConfig

IDENTITY_MAP = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

ViewParams = Tuple[float, float, float]


@dataclass
class SynthView:
    """
    合成视图

    back_map 把视图像素坐标映射回原图坐标；params 为 (S, t, φ)，φ 以度为单位；
    source_size 为原图 (宽, 高)。
    """
    image: Image
    back_map: np.ndarray
    params: ViewParams
    view_id: int = 0
    source_size: Optional[Tuple[int, int]] = None

    @property
    def forward_map(self) -> np.ndarray:
        """原图坐标 → 视图坐标"""
        return invert_affine(self.back_map)

    @property
    def area(self) -> int:
        return self.image.width * self.image.height


def enumerate_views(cfg: SynthesisConfig) -> List[ViewParams]:
    """
    枚举合成视图参数

    对每个 S（升序）、每个 t（升序）：t=1 只取 φ=0；否则 φ = 0, Δφ, 2Δφ, … < 360°，
    其中 Δφ = Δφbase/t。

    Args:
        cfg: 合成参数

    Returns:
        (S, t, φ) 列表
    """
    views: List[ViewParams] = []
    for S in sorted(set(cfg.scales)):
        for t in sorted(set(cfg.tilts)):
            if t == 1.0:
                views.append((S, 1.0, 0.0))
                continue
            step = cfg.delta_phi_base / t
            k = 0
            while k * step < 360.0 - 1e-9:
                views.append((S, t, k * step))
                k += 1
    return views


def synthesize_view(img: Image,
                    params: ViewParams,
                    sigma_base: float = 0.8,
                    scaled: Optional[Image] = None,
                    view_id: int = 0) -> SynthView:
    """
    生成单个合成视图

    Args:
        img: 原图
        params: (S, t, φ度)
        sigma_base: 抗混叠基础 σ
        scaled: 已下采样的 S 尺度图像（可选缓存）
        view_id: 视图编号

    Returns:
        SynthView；(1, 1, 0) 视图即原图本身，不做模糊

    Raises:
        EmptyOutput: 极端倾斜下画布退化
    """
    S, t, phi = params
    size = (img.width, img.height)
    if S == 1.0 and t == 1.0 and phi == 0.0:
        return SynthView(image=img.copy(), back_map=IDENTITY_MAP.copy(), params=params, view_id=view_id,
                         source_size=size)

    if scaled is None:
        scaled = img if S == 1.0 else downsample(img, S, sigma_base)
    to_original = IDENTITY_MAP.copy() if S == 1.0 else scale_back_map(S)

    if t == 1.0 and phi == 0.0:
        return SynthView(image=scaled, back_map=to_original, params=params, view_id=view_id,
                         source_size=size)

    angle = np.deg2rad(phi)
    source = scaled
    if t > 1.0:
        source = oriented_gaussian_blur(scaled, t * sigma_base, sigma_base, angle)
    A = np.zeros((2, 3))
    A[:, :2] = np.diag([1.0 / t, 1.0]) @ rotation2d(angle)
    warped, inverse = warp_affine(source, A)
    return SynthView(
        image=warped,
        back_map=compose_affine_maps(to_original, inverse),
        params=params,
        view_id=view_id,
        source_size=size,
    )


def iter_views(img: Image, cfg: SynthesisConfig, first_view_id: int = 0) -> Iterator[SynthView]:
    """按枚举顺序惰性生成视图，每个尺度只下采样一次"""
    scaled_cache: Dict[float, Image] = {}
    for offset, params in enumerate(enumerate_views(cfg)):
        S = params[0]
        if S not in scaled_cache:
            scaled_cache[S] = img if S == 1.0 else downsample(img, S, cfg.sigma_base)
        view = synthesize_view(img, params, cfg.sigma_base, scaled_cache[S], first_view_id + offset)
        log_debug(f"视图 {view.view_id}: S={params[0]:g}, t={params[1]:g}, φ={params[2]:.1f}° "
                  f"→ {view.image.width}×{view.image.height}", 2)
        yield view


def synthesize(img: Image, cfg: SynthesisConfig) -> List[SynthView]:
    """
    生成全部合成视图

    Args:
        img: 原图
        cfg: 合成参数

    Returns:
        与 enumerate_views 顺序一致的 SynthView 列表
    """
    return list(iter_views(img, cfg))
