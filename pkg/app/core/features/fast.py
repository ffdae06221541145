"""
FAST 角点检测器（ORB 风格）

在 1.2 倍尺度金字塔上做分段测试角点检测，用 Harris 响应重新排序，
以半径 15 像素内的灰度质心确定方向，输出相似变换帧 shape = r·R(θ)。
"""

import math
from typing import List, Optional

import cv2
import numpy as np

from app.core.features.frames import AffineFrame, filter_supported, rank_frames
from app.core.geometry import rotation2d
from app.core.imgproc import Image
from app.schemas.config import DetectorParams, DetectorTier

FAST_THRESHOLD = 0.05
PYRAMID_LEVELS = 4
PYRAMID_FACTOR = 1.2
BASE_RADIUS = 5.0
CENTROID_RADIUS = 15
HARRIS_BLOCK = 7
HARRIS_K = 0.04
MIN_LEVEL_SIZE = 16

_DISC = np.array([(dy, dx)
                  for dy in range(-CENTROID_RADIUS, CENTROID_RADIUS + 1)
                  for dx in range(-CENTROID_RADIUS, CENTROID_RADIUS + 1)
                  if dx * dx + dy * dy <= CENTROID_RADIUS * CENTROID_RADIUS])


def intensity_centroid_angles(level: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """
    灰度质心方向 θ = atan2(m01, m10)

    Args:
        level: (H, W) 浮点图像
        xs: 整数列坐标
        ys: 整数行坐标

    Returns:
        弧度，范围 [0, 2π)
    """
    padded = np.pad(level, CENTROID_RADIUS, mode="edge")
    rows = ys[:, None] + CENTROID_RADIUS + _DISC[None, :, 0]
    cols = xs[:, None] + CENTROID_RADIUS + _DISC[None, :, 1]
    values = padded[rows, cols]
    m10 = values @ _DISC[:, 1].astype(np.float64)
    m01 = values @ _DISC[:, 0].astype(np.float64)
    return np.mod(np.arctan2(m01, m10), 2.0 * math.pi)


def detect_fast(img: Image, params: Optional[DetectorParams] = None) -> List[AffineFrame]:
    """
    FAST 检测

    Args:
        img: 输入视图（≥ 16×16）
        params: response_threshold 为分段测试的灰度差（[0,1] 单位，默认 0.05），
            levels 为金字塔层数（默认 4）

    Returns:
        按 Harris 响应降序的相似帧
    """
    params = params or DetectorParams()
    if min(img.width, img.height) < MIN_LEVEL_SIZE:
        return []
    threshold = FAST_THRESHOLD if params.response_threshold is None else params.response_threshold
    n_levels = params.levels or PYRAMID_LEVELS
    detector = cv2.FastFeatureDetector_create(threshold=max(1, int(round(threshold * 255))),
                                              nonmaxSuppression=True)
    base = np.clip(np.rint(img.data * 255.0), 0, 255).astype(np.uint8)

    frames: List[AffineFrame] = []
    for level_index in range(n_levels):
        factor = PYRAMID_FACTOR ** level_index
        w = int(round(img.width / factor))
        h = int(round(img.height / factor))
        if min(w, h) < MIN_LEVEL_SIZE:
            break
        level = base if level_index == 0 else cv2.resize(base, (w, h), interpolation=cv2.INTER_LINEAR)
        keypoints = detector.detect(level, None)
        if not keypoints:
            continue
        xs = np.array([int(round(kp.pt[0])) for kp in keypoints])
        ys = np.array([int(round(kp.pt[1])) for kp in keypoints])
        level_float = level.astype(np.float32) / 255.0
        harris = cv2.cornerHarris(level_float, HARRIS_BLOCK, 3, HARRIS_K)
        angles = intensity_centroid_angles(level_float.astype(np.float64), xs, ys)
        sx = img.width / w
        sy = img.height / h
        radius = BASE_RADIUS * factor
        for x, y, angle in zip(xs, ys, angles):
            center = np.array([(x + 0.5) * sx - 0.5, (y + 0.5) * sy - 0.5])
            frames.append(AffineFrame(center=center, shape=radius * rotation2d(angle),
                                      response=float(harris[y, x]), tier=DetectorTier.FAST))

    frames = filter_supported(frames, img, lambda f: 0.8 * f.scale)
    return rank_frames(frames, params.max_features)
