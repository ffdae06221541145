"""
RootSIFT 描述子

4×4 空间格 × 8 方向的梯度直方图（三线性插值投票），L2 归一化后在 0.2 处截断并
再次归一化，最后 L1 归一化并逐元素开方，结果的 L2 范数为 1。
"""

import math

import numpy as np

from app.core.logging_utils import log_debug

SPATIAL_BINS = 4
ORIENT_BINS = 8
CLIP = 0.2
DIM = SPATIAL_BINS * SPATIAL_BINS * ORIENT_BINS
PATCH_SIZE = 41

UNIFORM = np.full(DIM, 1.0 / math.sqrt(DIM))


def sift_histograms(patches: np.ndarray) -> np.ndarray:
    """
    批量计算原始 SIFT 直方图

    Args:
        patches: (N, n, n)

    Returns:
        (N, 128) 未归一化直方图
    """
    patches = np.asarray(patches, dtype=np.float64)
    N, n, _ = patches.shape
    gy, gx = np.gradient(patches, axis=(1, 2))
    magnitude = np.hypot(gx, gy)
    angle = np.mod(np.arctan2(gy, gx), 2.0 * math.pi)

    half = n / 2.0
    coords = (np.arange(n) + 0.5) / n * SPATIAL_BINS - 0.5
    rb, cb = np.meshgrid(coords, coords, indexing="ij")
    offsets = np.arange(n) - (n - 1) / 2.0
    yy, xx = np.meshgrid(offsets, offsets, indexing="ij")
    weight = np.exp(-(xx ** 2 + yy ** 2) / (2.0 * half ** 2))

    ob = angle / (2.0 * math.pi) * ORIENT_BINS
    r0 = np.floor(rb).astype(int)
    c0 = np.floor(cb).astype(int)
    o0 = np.floor(ob).astype(int)
    dr = rb - r0
    dc = cb - c0
    do = ob - o0
    votes = magnitude * weight

    padded = SPATIAL_BINS + 2
    cells = padded * padded * ORIENT_BINS
    base = (np.arange(N) * cells)[:, None, None]
    hist = np.zeros(N * cells)
    for ir in (0, 1):
        wr = dr if ir else 1.0 - dr
        for ic in (0, 1):
            wc = dc if ic else 1.0 - dc
            for io in (0, 1):
                wo = do if io else 1.0 - do
                index = (base
                         + ((r0 + ir + 1) * padded + (c0 + ic + 1))[None] * ORIENT_BINS
                         + (o0 + io) % ORIENT_BINS)
                w = votes * (wr * wc)[None] * wo
                hist += np.bincount(index.ravel(), w.ravel(), minlength=N * cells)
    hist = hist.reshape(N, padded, padded, ORIENT_BINS)[:, 1:-1, 1:-1, :]
    return hist.reshape(N, DIM)


def root_sift_normalize(hist: np.ndarray) -> np.ndarray:
    """L2 → 截断 0.2 → L2 → L1 → 开方；零能量行返回均匀单位向量"""
    hist = np.asarray(hist, dtype=np.float64).copy()
    norms = np.linalg.norm(hist, axis=1)
    zero = norms <= 1e-12
    if np.any(zero):
        log_debug(f"{int(zero.sum())} 个补丁梯度能量为零，使用均匀描述子", 2)
    hist[zero] = 1.0
    hist /= np.linalg.norm(hist, axis=1, keepdims=True)
    hist = np.minimum(hist, CLIP)
    hist /= np.linalg.norm(hist, axis=1, keepdims=True)
    hist /= hist.sum(axis=1, keepdims=True)
    out = np.sqrt(hist)
    out[zero] = UNIFORM
    return out


def root_sift_batch(patches: np.ndarray) -> np.ndarray:
    """(N, n, n) 补丁 → (N, 128) RootSIFT 向量"""
    return root_sift_normalize(sift_histograms(patches))
