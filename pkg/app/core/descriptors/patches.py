"""
测量区域归一化与主方向估计
"""

import math
from typing import List

import numpy as np
from scipy import ndimage

from app.core.geometry import rotation2d
from app.core.imgproc import sample_bilinear

MAGNIFICATION = 3.0
ORI_BINS = 36
ORI_PEAK_RATIO = 0.8
MAX_ORIENTATIONS = 2


def patch_grid(size: int, magnification: float = MAGNIFICATION):
    """补丁采样网格（单位圆坐标），返回 (qx, qy)，范围 ±magnification"""
    q = (np.arange(size) - (size - 1) / 2.0) * (2.0 * magnification / (size - 1))
    qy, qx = np.meshgrid(q, q, indexing="ij")
    return qx, qy


def normalize_patches(data: np.ndarray,
                      centers: np.ndarray,
                      lafs: np.ndarray,
                      size: int,
                      magnification: float = MAGNIFICATION) -> np.ndarray:
    """
    批量采样归一化补丁 p = c + LAF·q

    Args:
        data: (H, W) 图像
        centers: (N, 2)
        lafs: (N, 2, 2)，已包含方向旋转
        size: 补丁边长
        magnification: 测量区域放大倍数

    Returns:
        (N, size, size) 补丁，图像外为 0
    """
    qx, qy = patch_grid(size, magnification)
    px = centers[:, 0, None, None] + lafs[:, 0, 0, None, None] * qx + lafs[:, 0, 1, None, None] * qy
    py = centers[:, 1, None, None] + lafs[:, 1, 0, None, None] * qx + lafs[:, 1, 1, None, None] * qy
    return sample_bilinear(data, px, py)


def normalize_patch(data: np.ndarray, center, shape, orientation: float, size: int,
                    magnification: float = MAGNIFICATION) -> np.ndarray:
    """
    单个帧的补丁：size×size，采样点 c + shape·R(orientation)·q，q ∈ [-3, 3]²

    Args:
        data: (H, W) 图像
        center: 帧中心 (x, y)
        shape: 2×2 帧形状
        orientation: 弧度
        size: 补丁边长

    Returns:
        (size, size) 补丁，图像外为 0
    """
    laf = np.asarray(shape, dtype=np.float64) @ rotation2d(orientation)
    return normalize_patches(data, np.asarray(center, dtype=np.float64)[None, :], laf[None], size,
                             magnification)[0]


def dominant_orientations(patch: np.ndarray) -> List[float]:
    """
    主方向估计

    36 个方向柱，幅值经高斯加权并线性插值投票；平滑后取不低于最大值 80% 的
    局部峰，抛物线插值精化，最多返回 2 个。平坦补丁返回 [0]。

    Args:
        patch: (n, n) 补丁，n ≥ 8

    Returns:
        弧度列表，按峰值降序
    """
    patch = np.asarray(patch, dtype=np.float64)
    n = patch.shape[0]
    gy, gx = np.gradient(patch)
    magnitude = np.hypot(gx, gy)
    angle = np.mod(np.arctan2(gy, gx), 2.0 * math.pi)

    half = (n - 1) / 2.0
    yy, xx = np.mgrid[0:n, 0:n] - half
    r2 = xx ** 2 + yy ** 2
    sigma = 0.5 * half
    weight = np.exp(-r2 / (2.0 * sigma ** 2)) * (r2 <= half ** 2)
    votes = (magnitude * weight).ravel()

    position = angle.ravel() / (2.0 * math.pi) * ORI_BINS
    lower = np.floor(position).astype(int)
    frac = position - lower
    hist = np.bincount(lower % ORI_BINS, votes * (1.0 - frac), minlength=ORI_BINS)
    hist += np.bincount((lower + 1) % ORI_BINS, votes * frac, minlength=ORI_BINS)
    if hist.max() <= 1e-12:
        return [0.0]

    for _ in range(2):
        hist = ndimage.convolve1d(hist, [0.25, 0.5, 0.25], mode="wrap")

    left = np.roll(hist, 1)
    right = np.roll(hist, -1)
    peaks = np.flatnonzero((hist > left) & (hist >= right) & (hist >= ORI_PEAK_RATIO * hist.max()))
    if peaks.size == 0:
        return [0.0]
    peaks = peaks[np.argsort(-hist[peaks], kind="stable")][:MAX_ORIENTATIONS]

    result = []
    for k in peaks:
        l, c, r = left[k], hist[k], right[k]
        denom = l - 2.0 * c + r
        shift = 0.5 * (l - r) / denom if denom != 0 else 0.0
        result.append(float(np.mod((k + shift) * 2.0 * math.pi / ORI_BINS, 2.0 * math.pi)))
    return result
