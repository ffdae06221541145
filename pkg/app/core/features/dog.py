"""
DoG 斑点检测器

高斯差分尺度空间极值 + 三维二次插值亚像素精化 + 主曲率比边缘抑制，
输出半径与检测尺度成正比的圆形帧。
"""

from typing import List, Optional

import numpy as np
from scipy import ndimage

from app.core.features.frames import AffineFrame, filter_supported, rank_frames
from app.core.features.scale_space import INTERVALS, build_scale_space
from app.core.imgproc import Image
from app.schemas.config import DetectorParams, DetectorTier

CONTRAST_THRESHOLD = 0.04
EDGE_RATIO = 10.0
IMG_BORDER = 5
MAX_REFINE_STEPS = 5
SUPPORT_FACTOR = 2.0


def _derivatives(dog: np.ndarray, s: np.ndarray, y: np.ndarray, x: np.ndarray):
    """在整数位置 (s, y, x) 处用中心差分计算梯度与 Hessian"""
    c = dog[s, y, x]
    dx = (dog[s, y, x + 1] - dog[s, y, x - 1]) / 2.0
    dy = (dog[s, y + 1, x] - dog[s, y - 1, x]) / 2.0
    ds = (dog[s + 1, y, x] - dog[s - 1, y, x]) / 2.0
    dxx = dog[s, y, x + 1] + dog[s, y, x - 1] - 2.0 * c
    dyy = dog[s, y + 1, x] + dog[s, y - 1, x] - 2.0 * c
    dss = dog[s + 1, y, x] + dog[s - 1, y, x] - 2.0 * c
    dxy = (dog[s, y + 1, x + 1] - dog[s, y + 1, x - 1] - dog[s, y - 1, x + 1] + dog[s, y - 1, x - 1]) / 4.0
    dxs = (dog[s + 1, y, x + 1] - dog[s + 1, y, x - 1] - dog[s - 1, y, x + 1] + dog[s - 1, y, x - 1]) / 4.0
    dys = (dog[s + 1, y + 1, x] - dog[s + 1, y - 1, x] - dog[s - 1, y + 1, x] + dog[s - 1, y - 1, x]) / 4.0
    grad = np.stack([dx, dy, ds], axis=1)
    hess = np.stack([
        np.stack([dxx, dxy, dxs], axis=1),
        np.stack([dxy, dyy, dys], axis=1),
        np.stack([dxs, dys, dss], axis=1),
    ], axis=1)
    return c, grad, hess


def find_extrema(dog: np.ndarray, threshold: float, border: int = IMG_BORDER) -> np.ndarray:
    """
    在 (层, 行, 列) 三维邻域中找严格意义下的局部极值

    Returns:
        (N, 3) 整数数组，每行为 (s, y, x)
    """
    L, H, W = dog.shape
    is_max = (dog == ndimage.maximum_filter(dog, size=3, mode="nearest")) & (dog > threshold)
    is_min = (dog == ndimage.minimum_filter(dog, size=3, mode="nearest")) & (dog < -threshold)
    cand = is_max | is_min
    cand[[0, L - 1], :, :] = False
    cand[:, :border, :] = False
    cand[:, H - border:, :] = False
    cand[:, :, :border] = False
    cand[:, :, W - border:] = False
    return np.argwhere(cand)


def refine_extrema(dog: np.ndarray, points: np.ndarray, border: int = IMG_BORDER):
    """
    三维二次插值精化，最多移动 5 次

    Returns:
        (整数位置 (N,3), 偏移 (N,3) 顺序为 x,y,s, 插值后的响应 (N,), 2D Hessian (N,2,2))
    """
    L, H, W = dog.shape
    pos = points.copy()
    alive = np.ones(len(pos), dtype=bool)
    offset = np.zeros((len(pos), 3))
    done = np.zeros(len(pos), dtype=bool)
    for _ in range(MAX_REFINE_STEPS):
        idx = np.flatnonzero(alive & ~done)
        if idx.size == 0:
            break
        s, y, x = pos[idx, 0], pos[idx, 1], pos[idx, 2]
        _, grad, hess = _derivatives(dog, s, y, x)
        det = np.linalg.det(hess)
        good = np.abs(det) > 1e-12
        alive[idx[~good]] = False
        idx, grad, hess = idx[good], grad[good], hess[good]
        if idx.size == 0:
            break
        delta = -np.linalg.solve(hess, grad[..., None])[..., 0]
        offset[idx] = delta
        converged = np.all(np.abs(delta) < 0.5, axis=1)
        done[idx[converged]] = True

        moving = idx[~converged]
        step = np.rint(offset[moving]).astype(int)
        pos[moving, 2] += step[:, 0]
        pos[moving, 1] += step[:, 1]
        pos[moving, 0] += step[:, 2]
        inside = ((pos[moving, 0] >= 1) & (pos[moving, 0] <= L - 2)
                  & (pos[moving, 1] >= border) & (pos[moving, 1] < H - border)
                  & (pos[moving, 2] >= border) & (pos[moving, 2] < W - border))
        alive[moving[~inside]] = False

    keep = alive & done
    pos, offset = pos[keep], offset[keep]
    s, y, x = pos[:, 0], pos[:, 1], pos[:, 2]
    c, grad, hess = _derivatives(dog, s, y, x)
    value = c + 0.5 * np.sum(grad * offset, axis=1)
    return pos, offset, value, hess[:, :2, :2]


def detect_dog(img: Image, params: Optional[DetectorParams] = None) -> List[AffineFrame]:
    """
    DoG 检测

    Args:
        img: 输入视图（≥ 32×32）
        params: 检测器参数，response_threshold 为对比度阈值（默认 0.04），
            levels 为每组间隔数（默认 3）

    Returns:
        按响应降序的圆形帧，形状 σ·I
    """
    params = params or DetectorParams()
    if min(img.width, img.height) < 2 * IMG_BORDER + 3:
        return []
    intervals = params.levels or INTERVALS
    contrast = CONTRAST_THRESHOLD if params.response_threshold is None else params.response_threshold
    pre_threshold = 0.5 * contrast / intervals
    k = 2.0 ** (1.0 / intervals)
    edge_limit = (EDGE_RATIO + 1.0) ** 2 / EDGE_RATIO

    frames: List[AffineFrame] = []
    for octave in build_scale_space(img.data, intervals=intervals):
        dog = np.diff(octave.gaussians, axis=0)
        points = find_extrema(dog, pre_threshold)
        if points.size == 0:
            continue
        pos, offset, value, h2 = refine_extrema(dog, points)
        trace = h2[:, 0, 0] + h2[:, 1, 1]
        det = h2[:, 0, 0] * h2[:, 1, 1] - h2[:, 0, 1] ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            edge_ok = (det > 0) & (trace ** 2 / det < edge_limit)
        ok = (np.abs(value) * intervals >= contrast) & edge_ok
        for (s, y, x), (ox, oy, os_), v in zip(pos[ok], offset[ok], value[ok]):
            # DoG 第 s 层介于 σ_s 与 k·σ_s 之间，取几何中点作为检测尺度
            sigma = octave.sigmas[0] * k ** (s + os_ + 0.5) * octave.step
            center = np.array([(x + ox) * octave.step, (y + oy) * octave.step])
            frames.append(AffineFrame(center=center, shape=sigma * np.eye(2), response=float(abs(v)),
                                      tier=DetectorTier.DOG))

    frames = filter_supported(frames, img, lambda f: SUPPORT_FACTOR * f.scale)
    return rank_frames(frames, params.max_features)
