"""
图像容器与读写

Image 保存 [0,1] 范围的亮度（或叠加图的 RGB）数据以及可选的有效像素掩码。
"""

import os
from dataclasses import dataclass
from typing import Optional

import cv2
import numpy as np
from scipy import ndimage

from app.core.errors import ModsError


@dataclass
class Image:
    """
    灰度图像

    data 为 (H, W) 的 float64 数组，按行存储；叠加图允许 (H, W, 3)。
    mask 为 None 表示所有像素有效，否则为 (H, W) 布尔数组。
    """
    data: np.ndarray
    mask: Optional[np.ndarray] = None

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim not in (2, 3):
            raise ModsError(f"图像维度错误: {self.data.shape}")
        if not np.all(np.isfinite(self.data)):
            raise ModsError("图像包含非有限值")
        if self.mask is not None:
            self.mask = np.asarray(self.mask, dtype=bool)
            if self.mask.shape != self.data.shape[:2]:
                raise ModsError("掩码尺寸与图像不一致")

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def is_color(self) -> bool:
        return self.data.ndim == 3

    def valid_mask(self) -> np.ndarray:
        """有效像素掩码（无掩码时全为 True）"""
        if self.mask is None:
            return np.ones(self.data.shape[:2], dtype=bool)
        return self.mask

    def support_distance(self) -> np.ndarray:
        """
        每个像素到最近无效像素或图像边界外的欧氏距离

        检测器用它丢弃测量区域越过画布边界的特征。
        """
        padded = np.pad(self.valid_mask(), 1, mode="constant", constant_values=False)
        return ndimage.distance_transform_edt(padded)[1:-1, 1:-1]

    def copy(self) -> "Image":
        return Image(self.data.copy(), None if self.mask is None else self.mask.copy())


def load_image(path: str) -> Image:
    """
    读取 PGM/PNG/JPEG 等格式，转换为 BT.601 亮度并缩放到 [0,1]

    Args:
        path: 图像路径

    Returns:
        灰度 Image
    """
    if not os.path.exists(path):
        raise ModsError(f"图像文件不存在: {path}")
    raw = cv2.imread(path, cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ModsError(f"无法解码图像: {path}")
    return _to_luminance(raw)


def decode_image(payload: bytes) -> Image:
    """从内存中的编码字节（如上传文件）解码为灰度 Image"""
    raw = cv2.imdecode(np.frombuffer(payload, dtype=np.uint8), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ModsError("无法解码上传的图像")
    return _to_luminance(raw)


def _to_luminance(raw: np.ndarray) -> Image:
    if raw.ndim == 3:
        if raw.shape[2] == 4:
            raw = cv2.cvtColor(raw, cv2.COLOR_BGRA2BGR)
        # OpenCV 的 BGR2GRAY 使用 BT.601 权重 0.299/0.587/0.114
        raw = cv2.cvtColor(raw, cv2.COLOR_BGR2GRAY)
    scale = 65535.0 if raw.dtype == np.uint16 else 255.0
    return Image(raw.astype(np.float64) / scale)


def save_image(path: str, img: Image) -> None:
    """
    保存为 PNG（灰度或 RGB）

    Args:
        path: 输出路径
        img: 图像
    """
    data = np.clip(np.rint(img.data * 255.0), 0, 255).astype(np.uint8)
    if img.is_color:
        data = cv2.cvtColor(data, cv2.COLOR_RGB2BGR)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    if not cv2.imwrite(path, data):
        raise ModsError(f"写入图像失败: {path}")
