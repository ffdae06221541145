"""
高斯尺度空间

DoG 与 Hessian 检测器共用的按组（octave）组织的高斯金字塔。
"""

import math
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy import ndimage

SIGMA0 = 1.6
INIT_SIGMA = 0.5
INTERVALS = 3
MIN_OCTAVE_SIZE = 16


@dataclass
class Octave:
    """一组高斯图像，sigmas 为组内坐标下的绝对 σ，step 为相对输入图像的像素间距"""
    index: int
    gaussians: np.ndarray
    sigmas: np.ndarray
    step: float

    @property
    def shape(self):
        return self.gaussians.shape[1:]


def octave_count(height: int, width: int) -> int:
    """组数 ≈ log2(min(H, W)) - 3，且最小一组不小于 16 像素"""
    n = int(math.floor(math.log2(max(min(height, width), 1)))) - 3
    while n > 1 and min(height, width) / 2 ** (n - 1) < MIN_OCTAVE_SIZE:
        n -= 1
    return max(n, 1)


def build_scale_space(data: np.ndarray,
                      intervals: int = INTERVALS,
                      sigma0: float = SIGMA0,
                      init_sigma: float = INIT_SIGMA) -> List[Octave]:
    """
    构建高斯尺度空间

    每组 intervals+3 幅图像，相邻层 σ 比为 2^(1/intervals)；
    下一组以本组第 intervals 层隔点采样为基底。

    Args:
        data: (H, W) 灰度数组
        intervals: 每组间隔数
        sigma0: 每组第 0 层的 σ
        init_sigma: 输入图像假定已有的模糊

    Returns:
        Octave 列表
    """
    k = 2.0 ** (1.0 / intervals)
    n_levels = intervals + 3
    sigmas = sigma0 * k ** np.arange(n_levels)
    increments = [math.sqrt(max(sigma0 ** 2 - init_sigma ** 2, 0.01))]
    for i in range(1, n_levels):
        increments.append(math.sqrt(sigmas[i] ** 2 - sigmas[i - 1] ** 2))

    octaves: List[Octave] = []
    base = ndimage.gaussian_filter(np.asarray(data, dtype=np.float64), increments[0], mode="nearest")
    for o in range(octave_count(*data.shape)):
        levels = [base]
        for i in range(1, n_levels):
            levels.append(ndimage.gaussian_filter(levels[-1], increments[i], mode="nearest"))
        octaves.append(Octave(index=o, gaussians=np.stack(levels), sigmas=sigmas.copy(), step=2.0 ** o))
        base = levels[intervals][::2, ::2]
    return octaves
