"""
描述子与带描述子的特征
"""

import math
from dataclasses import dataclass

import numpy as np

from app.core.features.frames import AffineFrame
from app.core.geometry import rotation2d
from app.schemas.config import DescriptorKind


@dataclass
class Descriptor:
    """RootSift 为 128 维单位向量；Binary 为 256 位，按 32 字节打包存储"""
    kind: DescriptorKind
    data: np.ndarray

    @property
    def bits(self) -> np.ndarray:
        """Binary 描述子展开为 256 个 0/1"""
        return np.unpackbits(np.asarray(self.data, dtype=np.uint8))

    def to_text(self) -> str:
        """128 个小数或 64 位十六进制"""
        if self.kind == DescriptorKind.BINARY:
            return bytes(np.asarray(self.data, dtype=np.uint8)).hex()
        return " ".join(f"{v:.6f}" for v in self.data)


@dataclass
class DescribedFeature:
    """帧 + 描述子 + 方向（弧度，[0, 2π)）"""
    frame: AffineFrame
    descriptor: Descriptor
    orientation: float = 0.0

    def __post_init__(self):
        self.orientation = float(math.fmod(self.orientation, 2.0 * math.pi))
        if self.orientation < 0:
            self.orientation += 2.0 * math.pi

    @property
    def kind(self) -> DescriptorKind:
        return self.descriptor.kind

    @property
    def center(self) -> np.ndarray:
        return self.frame.center

    @property
    def laf(self) -> np.ndarray:
        """局部仿射帧 shape·R(orientation)"""
        return self.frame.shape @ rotation2d(self.orientation)
