"""
BRIEF 二进制描述子

32×32 补丁经 σ=2 平滑后，按固定的 256 个点对比较灰度：I(p1) < I(p2) 记为 1。
"""

import numpy as np
from scipy import ndimage

from app.core.descriptors.brief_pattern import BRIEF_PAIRS

PATCH_SIZE = 32
SMOOTH_SIGMA = 2.0
N_BITS = 256

_PAIRS = np.array(BRIEF_PAIRS, dtype=int)
_CENTER = PATCH_SIZE // 2


def brief_bits(patches: np.ndarray) -> np.ndarray:
    """
    批量计算 BRIEF 位

    Args:
        patches: (N, 32, 32) 未平滑补丁

    Returns:
        (N, 256) 布尔数组
    """
    patches = np.asarray(patches, dtype=np.float64)
    smooth = ndimage.gaussian_filter(patches, sigma=(0, SMOOTH_SIGMA, SMOOTH_SIGMA), mode="nearest")
    a = smooth[:, _CENTER + _PAIRS[:, 1], _CENTER + _PAIRS[:, 0]]
    b = smooth[:, _CENTER + _PAIRS[:, 3], _CENTER + _PAIRS[:, 2]]
    return a < b


def brief_batch(patches: np.ndarray) -> np.ndarray:
    """(N, 32, 32) 补丁 → (N, 32) uint8 打包描述子"""
    return np.packbits(brief_bits(patches), axis=1)
