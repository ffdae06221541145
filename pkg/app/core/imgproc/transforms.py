"""
图像变换模块

视图合成需要的基本变换：可分离高斯模糊、任意方向的各向异性高斯模糊、
双线性仿射扭曲（画布取扭曲后角点的包围盒）和下采样。
所有变换均为确定性纯函数。
"""

import math
from typing import Tuple

import numpy as np
from scipy import ndimage, signal

from app.core.errors import DomainError, EmptyOutput, SingularMatrix
from app.core.geometry import apply_affine, invert_affine
from app.core.imgproc.image import Image

SIGMA_BASE = 0.8
TRUNCATE = 4.0


def gaussian_blur(img: Image, sigma_x: float, sigma_y: float) -> Image:
    """
    可分离高斯模糊，核截断于 4σ，边界复制

    Args:
        img: 输入图像
        sigma_x: 水平方向 σ（像素），0 表示该方向不处理
        sigma_y: 垂直方向 σ（像素）

    Returns:
        模糊后的新图像（掩码保持不变）
    """
    if sigma_x < 0 or sigma_y < 0:
        raise DomainError(f"σ 不能为负: ({sigma_x}, {sigma_y})")
    data = img.data.copy()
    if sigma_x > 0:
        data = ndimage.gaussian_filter1d(data, sigma_x, axis=1, mode="nearest", truncate=TRUNCATE)
    if sigma_y > 0:
        data = ndimage.gaussian_filter1d(data, sigma_y, axis=0, mode="nearest", truncate=TRUNCATE)
    return Image(data, None if img.mask is None else img.mask.copy())


def oriented_gaussian_blur(img: Image, sigma_u: float, sigma_v: float, angle: float) -> Image:
    """
    各向异性高斯模糊，主轴定义在旋转坐标系 r = R(angle)·p 中

    sigma_u 作用于旋转后的水平方向，sigma_v 作用于旋转后的垂直方向。
    轴对齐时退化为可分离模糊，否则用 FFT 卷积实现同一个核。

    Args:
        img: 输入图像
        sigma_u: 旋转后水平方向 σ
        sigma_v: 旋转后垂直方向 σ
        angle: 旋转角（弧度）

    Returns:
        模糊后的新图像
    """
    s, c = math.sin(angle), math.cos(angle)
    if abs(s) < 1e-12:
        return gaussian_blur(img, sigma_u, sigma_v)
    if abs(c) < 1e-12:
        return gaussian_blur(img, sigma_v, sigma_u)
    if sigma_u <= 0 or sigma_v <= 0:
        raise DomainError("斜向模糊要求两个 σ 都为正")

    R = np.array([[c, -s], [s, c]])
    cov = R.T @ np.diag([sigma_u ** 2, sigma_v ** 2]) @ R
    inv_cov = np.linalg.inv(cov)
    radius = int(math.ceil(TRUNCATE * max(sigma_u, sigma_v)))
    dy, dx = np.mgrid[-radius:radius + 1, -radius:radius + 1].astype(np.float64)
    quad = inv_cov[0, 0] * dx * dx + 2.0 * inv_cov[0, 1] * dx * dy + inv_cov[1, 1] * dy * dy
    kernel = np.exp(-0.5 * quad)
    kernel /= kernel.sum()

    padded = np.pad(img.data, radius, mode="edge")
    data = signal.fftconvolve(padded, kernel, mode="valid")
    return Image(data, None if img.mask is None else img.mask.copy())


def warp_affine(img: Image, T: np.ndarray) -> Tuple[Image, np.ndarray]:
    """
    双线性仿射扭曲

    输出画布为输入四个角点像素中心映射后的包围盒，尺寸 ⌊extent⌋+1。
    源图外的像素置 0 并在掩码中标记为无效。

    Args:
        img: 输入图像
        T: 2×3 仿射映射（源 → 目标，像素坐标）

    Returns:
        (扭曲后的图像, 目标 → 源的精确逆映射 2×3)

    Raises:
        SingularMatrix: T 的 2×2 部分奇异
        EmptyOutput: 包围盒退化
    """
    T = np.asarray(T, dtype=np.float64).reshape(2, 3)
    if abs(np.linalg.det(T[:, :2])) < 1e-12:
        raise SingularMatrix("扭曲矩阵奇异")

    W, H = img.width, img.height
    corners = np.array([[0.0, 0.0], [W - 1.0, 0.0], [0.0, H - 1.0], [W - 1.0, H - 1.0]])
    mapped = apply_affine(T, corners)
    if not np.all(np.isfinite(mapped)):
        raise EmptyOutput("扭曲后角点非有限")
    mins = mapped.min(axis=0)
    extent = mapped.max(axis=0) - mins
    out_w = int(math.floor(extent[0] + 1e-9)) + 1
    out_h = int(math.floor(extent[1] + 1e-9)) + 1
    if out_w < 1 or out_h < 1:
        raise EmptyOutput(f"扭曲画布退化: {out_w}×{out_h}")

    forward = T.copy()
    forward[:, 2] -= mins
    inverse = invert_affine(forward)

    ys, xs = np.mgrid[0:out_h, 0:out_w].astype(np.float64)
    sx = inverse[0, 0] * xs + inverse[0, 1] * ys + inverse[0, 2]
    sy = inverse[1, 0] * xs + inverse[1, 1] * ys + inverse[1, 2]

    eps = 1e-9
    valid = (sx >= -eps) & (sx <= W - 1 + eps) & (sy >= -eps) & (sy <= H - 1 + eps)
    coords = np.array([sy, sx])
    data = ndimage.map_coordinates(img.data, coords, order=1, mode="nearest")
    if img.mask is not None:
        src_mask = ndimage.map_coordinates(img.mask.astype(np.float64), coords, order=1, mode="nearest")
        valid &= src_mask > 0.999
    data[~valid] = 0.0
    return Image(data, valid), inverse


def downsample(img: Image, S: float, sigma_base: float = SIGMA_BASE) -> Image:
    """
    尺度合成：σ = σbase·S 的高斯模糊后双线性重采样到 ⌈S·W⌉×⌈S·H⌉

    Args:
        img: 输入图像
        S: 下采样因子，0 < S ≤ 1
        sigma_base: 基础 σ

    Returns:
        下采样图像；输出像素 x 对应源坐标 x/S

    Raises:
        DomainError: S 不在 (0, 1] 内
    """
    if not 0.0 < S <= 1.0:
        raise DomainError(f"下采样因子必须在 (0, 1] 内，得到 {S}")
    sigma = sigma_base * S
    blurred = gaussian_blur(img, sigma, sigma)
    if S == 1.0:
        return blurred

    out_w = max(1, int(math.ceil(S * img.width - 1e-9)))
    out_h = max(1, int(math.ceil(S * img.height - 1e-9)))
    ys, xs = np.mgrid[0:out_h, 0:out_w].astype(np.float64)
    coords = np.array([ys / S, xs / S])
    data = ndimage.map_coordinates(blurred.data, coords, order=1, mode="nearest")
    mask = None
    if img.mask is not None:
        mask = ndimage.map_coordinates(img.mask.astype(np.float64), coords, order=1, mode="nearest") > 0.999
    return Image(data, mask)


def scale_back_map(S: float) -> np.ndarray:
    """下采样图像坐标 → 原图坐标的 2×3 映射"""
    return np.array([[1.0 / S, 0.0, 0.0], [0.0, 1.0 / S, 0.0]])


def sample_bilinear(data: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """
    双线性采样，图像外取 0

    Args:
        data: (H, W) 数组
        xs: 任意形状的 x 坐标
        ys: 与 xs 同形状的 y 坐标

    Returns:
        与 xs 同形状的采样值
    """
    H, W = data.shape
    coords = np.array([ys, xs])
    values = ndimage.map_coordinates(data, coords, order=1, mode="nearest")
    outside = (xs < 0) | (xs > W - 1) | (ys < 0) | (ys > H - 1)
    values[outside] = 0.0
    return values
