"""
Hessian-Affine 检测器

尺度归一化 Hessian 行列式的尺度空间极大值，随后用二阶矩矩阵做 Baumberg 式
仿射自适应：在归一化补丁上估计 μ，U ← U·μ^(-1/2) 并归一化到 det(U)=1，
直到 μ 的各向异性足够小。不收敛或条件数超过 20 的帧被丢弃。
"""

from typing import List, Optional

import numpy as np
from scipy import ndimage

from app.core.features.frames import AffineFrame, filter_supported, rank_frames
from app.core.features.scale_space import INTERVALS, Octave, build_scale_space
from app.core.imgproc import Image
from app.schemas.config import DetectorParams, DetectorTier

HESSIAN_THRESHOLD = 1e-4
IMG_BORDER = 5
MAX_CONDITION = 20.0
CONVERGENCE_EPS = 0.05
SUPPORT_FACTOR = 2.0

# 自适应补丁：±PATCH_RADIUS 个 σ，PATCH_SIZE×PATCH_SIZE 个采样点
PATCH_RADIUS = 3.0
PATCH_SIZE = 19
INTEGRATION_SIGMA = 1.5
DERIVATIVE_SIGMA = 0.7


def hessian_response(octave: Octave) -> np.ndarray:
    """每层的尺度归一化 Hessian 行列式 σ⁴·(Lxx·Lyy - Lxy²)"""
    responses = []
    for level, sigma in zip(octave.gaussians, octave.sigmas):
        gy, gx = np.gradient(level)
        gxy, gxx = np.gradient(gx)
        gyy, _ = np.gradient(gy)
        responses.append(sigma ** 4 * (gxx * gyy - gxy ** 2))
    return np.stack(responses)


def _hessian_maxima(det: np.ndarray, threshold: float) -> np.ndarray:
    L, H, W = det.shape
    peak = (det == ndimage.maximum_filter(det, size=3, mode="nearest")) & (det > threshold)
    peak[[0, L - 1], :, :] = False
    peak[:, :IMG_BORDER, :] = False
    peak[:, H - IMG_BORDER:, :] = False
    peak[:, :, :IMG_BORDER] = False
    peak[:, :, W - IMG_BORDER:] = False
    return np.argwhere(peak)


def _subpixel(det: np.ndarray, pts: np.ndarray):
    """空间二次插值与尺度方向抛物线插值，偏移限制在半个像素内"""
    s, y, x = pts[:, 0], pts[:, 1], pts[:, 2]
    c = det[s, y, x]
    dx = (det[s, y, x + 1] - det[s, y, x - 1]) / 2.0
    dy = (det[s, y + 1, x] - det[s, y - 1, x]) / 2.0
    dxx = det[s, y, x + 1] + det[s, y, x - 1] - 2.0 * c
    dyy = det[s, y + 1, x] + det[s, y - 1, x] - 2.0 * c
    dxy = (det[s, y + 1, x + 1] - det[s, y + 1, x - 1] - det[s, y - 1, x + 1] + det[s, y - 1, x - 1]) / 4.0
    hdet = dxx * dyy - dxy ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        ox = np.where(np.abs(hdet) > 1e-18, -(dyy * dx - dxy * dy) / hdet, 0.0)
        oy = np.where(np.abs(hdet) > 1e-18, -(dxx * dy - dxy * dx) / hdet, 0.0)
        ds_num = det[s + 1, y, x] - det[s - 1, y, x]
        ds_den = det[s + 1, y, x] + det[s - 1, y, x] - 2.0 * c
        os_ = np.where(np.abs(ds_den) > 1e-18, -0.5 * ds_num / ds_den, 0.0)
    clip = lambda v: np.clip(np.nan_to_num(v), -0.5, 0.5)
    return clip(ox), clip(oy), clip(os_)


def _patch_grid():
    q = np.linspace(-PATCH_RADIUS, PATCH_RADIUS, PATCH_SIZE)
    qy, qx = np.meshgrid(q, q, indexing="ij")
    spacing = q[1] - q[0]
    weight = np.exp(-(qx ** 2 + qy ** 2) / (2.0 * INTEGRATION_SIGMA ** 2))
    return qx, qy, spacing, weight


def second_moment(image: np.ndarray, centers: np.ndarray, affines: np.ndarray) -> np.ndarray:
    """
    在归一化补丁上估计二阶矩矩阵

    Args:
        image: 采样所用的 (H, W) 图像
        centers: (N, 2) 中心
        affines: (N, 2, 2) 把单位坐标映射到图像坐标的矩阵（含尺度）

    Returns:
        (N, 2, 2) 归一化坐标下的二阶矩矩阵
    """
    qx, qy, spacing, weight = _patch_grid()
    px = centers[:, 0, None, None] + affines[:, 0, 0, None, None] * qx + affines[:, 0, 1, None, None] * qy
    py = centers[:, 1, None, None] + affines[:, 1, 0, None, None] * qx + affines[:, 1, 1, None, None] * qy
    patches = ndimage.map_coordinates(image, np.array([py, px]), order=1, mode="nearest")
    sigma_grid = DERIVATIVE_SIGMA / spacing
    patches = ndimage.gaussian_filter(patches, sigma=(0, sigma_grid, sigma_grid), mode="nearest")
    gy, gx = np.gradient(patches, axis=(1, 2))
    mu = np.empty((len(centers), 2, 2))
    mu[:, 0, 0] = np.sum(weight * gx * gx, axis=(1, 2))
    mu[:, 0, 1] = mu[:, 1, 0] = np.sum(weight * gx * gy, axis=(1, 2))
    mu[:, 1, 1] = np.sum(weight * gy * gy, axis=(1, 2))
    return mu


def adapt_shapes(image: np.ndarray, centers: np.ndarray, sigmas: np.ndarray, max_iterations: int):
    """
    批量仿射自适应

    Args:
        image: 采样图像（组内坐标）
        centers: (N, 2)
        sigmas: (N,) 检测尺度
        max_iterations: 迭代上限

    Returns:
        (U (N,2,2) 且 det=1, 收敛标记 (N,))
    """
    n = len(centers)
    U = np.tile(np.eye(2), (n, 1, 1))
    converged = np.zeros(n, dtype=bool)
    failed = np.zeros(n, dtype=bool)
    for _ in range(max_iterations):
        active = np.flatnonzero(~converged & ~failed)
        if active.size == 0:
            break
        affines = sigmas[active, None, None] * U[active]
        mu = second_moment(image, centers[active], affines)
        evals, evecs = np.linalg.eigh(mu)
        bad = evals[:, 0] <= 1e-12
        failed[active[bad]] = True
        active, evals, evecs = active[~bad], evals[~bad], evecs[~bad]
        if active.size == 0:
            break

        ratio = np.sqrt(evals[:, 0] / evals[:, 1])
        done = 1.0 - ratio < CONVERGENCE_EPS
        converged[active[done]] = True

        update = active[~done]
        ev, vec = evals[~done], evecs[~done]
        inv_sqrt = vec @ (ev[:, :, None] ** -0.5 * np.swapaxes(vec, 1, 2))
        new_U = U[update] @ inv_sqrt
        new_U /= np.sqrt(np.linalg.det(new_U))[:, None, None]
        U[update] = new_U

        cond = np.linalg.cond(U[update])
        failed[update[cond > MAX_CONDITION]] = True
    return U, converged & ~failed


def detect_hessaff(img: Image, params: Optional[DetectorParams] = None) -> List[AffineFrame]:
    """
    Hessian-Affine 检测

    Args:
        img: 输入视图（≥ 32×32）
        params: 检测器参数，response_threshold 为归一化 Hessian 阈值（默认 1e-4）

    Returns:
        按响应降序的仿射帧，形状 σ·U（det U = 1）
    """
    params = params or DetectorParams()
    if min(img.width, img.height) < 2 * IMG_BORDER + 3:
        return []
    intervals = params.levels or INTERVALS
    threshold = HESSIAN_THRESHOLD if params.response_threshold is None else params.response_threshold
    k = 2.0 ** (1.0 / intervals)

    frames: List[AffineFrame] = []
    for octave in build_scale_space(img.data, intervals=intervals):
        det = hessian_response(octave)
        pts = _hessian_maxima(det, threshold)
        if pts.size == 0:
            continue
        ox, oy, os_ = _subpixel(det, pts)
        centers = np.stack([pts[:, 2] + ox, pts[:, 1] + oy], axis=1)
        sigmas = octave.sigmas[0] * k ** (pts[:, 0] + os_)
        U, ok = adapt_shapes(octave.gaussians[0], centers, sigmas, params.max_adaptation_iterations)
        responses = det[pts[:, 0], pts[:, 1], pts[:, 2]]
        for i in np.flatnonzero(ok):
            shape = sigmas[i] * octave.step * U[i]
            frames.append(AffineFrame(center=centers[i] * octave.step, shape=shape,
                                      response=float(responses[i]), tier=DetectorTier.HESSAFF))

    frames = filter_supported(frames, img, lambda f: SUPPORT_FACTOR * f.axes[0])
    return rank_frames(frames, params.max_features)
