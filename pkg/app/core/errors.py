"""
异常定义模块

匹配引擎所有可预期错误的统一层次结构，根类为 ModsError。
"""

from typing import Any, Optional


class ModsError(Exception):
    """匹配引擎异常根类"""


class ConfigError(ModsError):
    """配置文件无法解析或校验失败"""


# ------------------------------
# 几何
# ------------------------------
class GeometryError(ModsError):
    """几何计算错误的基类"""


class SingularMatrix(GeometryError):
    """矩阵奇异（|det| 过小）"""


class MirrorMatrix(GeometryError):
    """行列式为负，镜像无法用 λ·R1·T·R2 表示"""


class DomainError(GeometryError, ValueError):
    """参数超出定义域"""


class DegenerateJacobian(GeometryError):
    """单应在该点的雅可比矩阵奇异"""


class ZeroLine(GeometryError):
    """两条极线的前两个分量同时为零"""


class DegenerateMotion(GeometryError):
    """零平移，基础矩阵退化为零矩阵"""


# ------------------------------
# 图像与特征
# ------------------------------
class EmptyOutput(ModsError):
    """扭曲后的画布小于 1×1"""


class ImageTooSmall(ModsError):
    """图像尺寸不足以生成要求的合成视图"""


class KindMismatch(ModsError):
    """查询描述子与索引描述子类型不一致"""


# ------------------------------
# 几何验证与编排
# ------------------------------
class InsufficientCorrespondences(ModsError):
    """候选对应数量不足以估计模型"""


class NoModel(ModsError):
    """RANSAC 未找到满足最小支持的模型"""


class NoSolution(ModsError):
    """所有步骤执行完毕仍未达到 θm，report 中保留最佳尝试"""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class MissingGroundTruth(ModsError):
    """评测时缺少真值"""
