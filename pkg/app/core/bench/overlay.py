"""
匹配结果叠加图

两幅图左右拼接，每个对应画一条线：通过 LAF 检查的为绿色，被 LAF 检查剔除的为红色。
"""

import cv2
import numpy as np

from app.core.imgproc import Image
from app.schemas.report import MatchReport

INLIER_COLOR = (0, 255, 0)
LAF_DISCARDED_COLOR = (255, 0, 0)
SUBPIXEL_BITS = 4


def _to_rgb8(img: Image) -> np.ndarray:
    data = np.clip(np.rint(img.data * 255.0), 0, 255).astype(np.uint8)
    if data.ndim == 2:
        data = np.repeat(data[:, :, None], 3, axis=2)
    return data


def _fixed(x: float) -> int:
    return int(round(x * (1 << SUBPIXEL_BITS)))


def render_overlay(img1: Image, img2: Image, report: MatchReport) -> Image:
    """
    绘制叠加图

    Args:
        img1: 图1
        img2: 图2
        report: 匹配报告（坐标为原图坐标）

    Returns:
        RGB Image，宽 w1 + w2，高 max(h1, h2)
    """
    w1, h1, w2, h2 = img1.width, img1.height, img2.width, img2.height
    canvas = np.zeros((max(h1, h2), w1 + w2, 3), dtype=np.uint8)
    canvas[:h1, :w1] = _to_rgb8(img1)
    canvas[:h2, w1:] = _to_rgb8(img2)

    for c in report.correspondences:
        color = INLIER_COLOR if c.laf_consistent else LAF_DISCARDED_COLOR
        cv2.line(canvas, (_fixed(c.x1), _fixed(c.y1)), (_fixed(c.x2 + w1), _fixed(c.y2)), color,
                 thickness=1, lineType=cv2.LINE_8, shift=SUBPIXEL_BITS)
    return Image(canvas.astype(np.float64) / 255.0)
