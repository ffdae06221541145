"""
仿射特征帧

AffineFrame 由中心和把单位圆映射到测量椭圆的 2×2 矩阵组成；
本模块还负责排序截断、支撑区域过滤，以及从合成视图反投影到原图。
"""

from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional

import numpy as np

from app.core.imgproc import Image
from app.schemas.config import DetectorTier

MIN_AXIS_PX = 0.5


@dataclass
class AffineFrame:
    """局部仿射帧"""
    center: np.ndarray
    shape: np.ndarray
    response: float
    tier: DetectorTier
    view_id: int = 0

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=np.float64).reshape(2)
        self.shape = np.asarray(self.shape, dtype=np.float64).reshape(2, 2)

    @property
    def x(self) -> float:
        return float(self.center[0])

    @property
    def y(self) -> float:
        return float(self.center[1])

    @property
    def scale(self) -> float:
        """√det(shape)，圆形帧即半径"""
        return float(np.sqrt(abs(np.linalg.det(self.shape))))

    @property
    def axes(self) -> np.ndarray:
        """椭圆半轴长（降序）"""
        return np.linalg.svd(self.shape, compute_uv=False)

    def is_valid(self) -> bool:
        return bool(np.linalg.det(self.shape) > 0 and self.axes[1] > MIN_AXIS_PX)


def frame_record(frame: AffineFrame) -> Dict[str, object]:
    """序列化为 x, y, a11, a12, a21, a22, response, tier, view_id"""
    a = frame.shape
    return {
        "x": frame.x,
        "y": frame.y,
        "a11": float(a[0, 0]),
        "a12": float(a[0, 1]),
        "a21": float(a[1, 0]),
        "a22": float(a[1, 1]),
        "response": float(frame.response),
        "tier": frame.tier.value,
        "view_id": int(frame.view_id),
    }


def rank_frames(frames: List[AffineFrame], max_features: int) -> List[AffineFrame]:
    """按响应降序排序（并列时按 (y, x)），截断到 max_features"""
    ordered = sorted(frames, key=lambda f: (-f.response, f.y, f.x))
    return ordered[:max_features]


def filter_supported(frames: List[AffineFrame],
                     img: Image,
                     margin: Callable[[AffineFrame], float]) -> List[AffineFrame]:
    """
    丢弃测量区域越过图像边界或无效像素的帧

    Args:
        frames: 候选帧（视图坐标）
        img: 检测所用图像
        margin: 每个帧要求的最小支撑距离（像素）

    Returns:
        保留的有效帧
    """
    if not frames:
        return []
    support = img.support_distance()
    H, W = support.shape
    kept = []
    for frame in frames:
        if not frame.is_valid():
            continue
        col = int(round(frame.x))
        row = int(round(frame.y))
        if not (0 <= col < W and 0 <= row < H):
            continue
        if support[row, col] >= margin(frame):
            kept.append(frame)
    return kept


def reproject_frame(frame: AffineFrame, back_map: np.ndarray, view_id: int,
                    bounds: Optional[tuple] = None) -> Optional[AffineFrame]:
    """单个帧的反投影，中心落在原图外时返回 None"""
    M = np.asarray(back_map, dtype=np.float64).reshape(2, 3)
    center = M[:, :2] @ frame.center + M[:, 2]
    if bounds is not None:
        W, H = bounds
        eps = 1e-9
        if not (-eps <= center[0] <= W - 1 + eps and -eps <= center[1] <= H - 1 + eps):
            return None
    return replace(frame, center=center, shape=M[:, :2] @ frame.shape, view_id=view_id)


def reproject_frames(frames: List[AffineFrame], view) -> List[AffineFrame]:
    """
    把合成视图上检测到的帧映射回原图坐标

    中心经 back_map 变换，形状左乘 back_map 的 2×2 部分；中心落在原图外的帧被丢弃。

    Args:
        frames: 视图坐标下的帧
        view: SynthView

    Returns:
        原图坐标下的帧
    """
    out = []
    for frame in frames:
        mapped = reproject_frame(frame, view.back_map, view.view_id, view.source_size)
        if mapped is not None:
            out.append(mapped)
    return out
