"""
MODS 配置模式

逐步升级的匹配计划：每一步由检测器、描述子、合成视图集合和匹配参数组成，
默认值为 7 步标准计划（第 3、4 步以 DoG 代替 MSER，保留其尺度集合）。
"""

import json
import math
import os
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from app.core.errors import ConfigError


class DetectorTier(str, Enum):
    """检测器层级"""
    FAST = "Fast"
    DOG = "DoG"
    HESSAFF = "HessAff"


class DescriptorKind(str, Enum):
    """描述子类型"""
    ROOT_SIFT = "RootSift"
    BINARY = "Binary"


class MatchStrategy(str, Enum):
    """候选对应生成策略"""
    FGINN = "FGINN"
    SNN = "SNN"


class DetectorParams(BaseModel):
    """检测器参数，None 表示使用该层级的默认值"""
    response_threshold: Optional[float] = Field(None, ge=0, description="响应阈值")
    max_features: int = Field(3000, ge=1, description="每个视图保留的最大特征数")
    levels: Optional[int] = Field(None, ge=1, description="尺度空间层数（FAST 金字塔层数 / 每组间隔数）")
    max_adaptation_iterations: int = Field(16, ge=1, description="仿射自适应迭代上限")


class SynthesisConfig(BaseModel):
    """视图合成参数"""
    scales: List[float] = Field(default_factory=lambda: [1.0], description="尺度集合 {S}")
    tilts: List[float] = Field(default_factory=lambda: [1.0], description="倾斜集合 {t}")
    delta_phi_base: float = Field(360.0, description="t=1 时的经度步长 Δφbase（度）")
    sigma_base: float = Field(0.8, gt=0, description="抗混叠基础 σ（像素）")

    @field_validator("scales")
    @classmethod
    def _check_scales(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("尺度集合不能为空")
        for s in value:
            if not 0.0 < s <= 1.0:
                raise ValueError(f"尺度必须在 (0, 1] 内: {s}")
        return value

    @field_validator("tilts")
    @classmethod
    def _check_tilts(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("倾斜集合不能为空")
        for t in value:
            if not (math.isfinite(t) and t >= 1.0):
                raise ValueError(f"倾斜必须 ≥ 1: {t}")
        return value

    @field_validator("delta_phi_base")
    @classmethod
    def _check_delta_phi(cls, value: float) -> float:
        if not 0.0 < value <= 360.0:
            raise ValueError(f"Δφbase 必须在 (0, 360] 内: {value}")
        return value


class MatchingConfig(BaseModel):
    """候选对应生成参数"""
    inconsistency_radius_px: float = Field(10.0, gt=0, description="几何不一致半径 n（像素）")
    ratio_threshold: Optional[float] = Field(None, gt=0, le=1, description="距离比阈值，None 时 RootSift 取 0.8、Binary 取 0.9")
    strategy: MatchStrategy = Field(MatchStrategy.FGINN, description="FGINN 或 SNN")
    k_neighbors: int = Field(10, ge=2, description="不一致扫描的候选池大小 k")
    duplicate_radius_px: float = Field(5.0, gt=0, description="重复对应聚类半径（像素）")

    def threshold_for(self, kind: DescriptorKind) -> float:
        """按描述子类型取距离比阈值"""
        if self.ratio_threshold is not None:
            return self.ratio_threshold
        return 0.9 if kind == DescriptorKind.BINARY else 0.8


class RansacConfig(BaseModel):
    """LO-RANSAC 参数"""
    h_threshold_px: float = Field(2.0, gt=0, description="单应内点阈值（对称转移误差，像素）")
    f_threshold_px: float = Field(1.0, gt=0, description="基础矩阵内点阈值（Sampson 误差，像素）")
    confidence: float = Field(0.999, gt=0, lt=1, description="置信度")
    max_iterations: int = Field(10000, ge=1, description="最大迭代次数")
    lo_refit_rounds: int = Field(3, ge=0, description="局部优化重拟合轮数")
    rng_seed: int = Field(0, ge=0, description="随机种子")
    h_degeneracy_ratio: float = Field(0.8, gt=0, le=1, description="F 内点中单应一致比例达到该值时返回 H")
    laf_factor: float = Field(2.0, gt=0, description="LAF 检查阈值相对点阈值的倍数")


class StepConfig(BaseModel):
    """单个 MODS 步骤"""
    detector: DetectorTier = Field(..., description="检测器层级")
    descriptor: DescriptorKind = Field(..., description="描述子类型")
    synthesis: SynthesisConfig = Field(default_factory=SynthesisConfig, description="合成视图集合")
    matching: MatchingConfig = Field(default_factory=MatchingConfig, description="匹配参数")
    detector_params: DetectorParams = Field(default_factory=DetectorParams, description="检测器参数")

    @model_validator(mode="after")
    def _check_compat(self) -> "StepConfig":
        expected = DescriptorKind.BINARY if self.detector == DetectorTier.FAST else DescriptorKind.ROOT_SIFT
        if self.descriptor != expected:
            raise ValueError(f"检测器 {self.detector.value} 需要 {expected.value} 描述子")
        return self

    def describe(self) -> str:
        """步骤的一行描述，用于日志"""
        syn = self.synthesis
        return (f"{self.detector.value}+{self.descriptor.value}, S={syn.scales}, "
                f"t={syn.tilts}, Δφ={syn.delta_phi_base:g}°/t")


def _step(detector: DetectorTier, scales: List[float], tilts: List[float], delta_phi_base: float) -> StepConfig:
    descriptor = DescriptorKind.BINARY if detector == DetectorTier.FAST else DescriptorKind.ROOT_SIFT
    return StepConfig(
        detector=detector,
        descriptor=descriptor,
        synthesis=SynthesisConfig(scales=scales, tilts=tilts, delta_phi_base=delta_phi_base),
    )


class ModsConfig(BaseModel):
    """完整升级计划"""
    steps: List[StepConfig] = Field(..., description="按顺序执行的步骤")
    theta_m: int = Field(15, ge=4, description="停止所需的最少验证内点数 θm")
    s_max: Optional[int] = Field(None, ge=1, description="最多执行的步数，None 表示全部")
    ransac: RansacConfig = Field(default_factory=RansacConfig, description="几何验证参数")

    @model_validator(mode="after")
    def _check_steps(self) -> "ModsConfig":
        if not self.steps:
            raise ValueError("步骤列表不能为空")
        if self.s_max is None:
            self.s_max = len(self.steps)
        if self.s_max > len(self.steps):
            raise ValueError(f"s_max={self.s_max} 超过步骤数 {len(self.steps)}")
        return self

    @classmethod
    def default(cls) -> "ModsConfig":
        """7 步标准计划（MSER 位置由 DoG 代替）"""
        multi_scale = [1.0, 0.25, 0.125]
        return cls(steps=[
            _step(DetectorTier.FAST, [1.0], [1.0], 360.0),
            _step(DetectorTier.FAST, [1.0], [1.0, 5.0, 9.0], 360.0),
            _step(DetectorTier.DOG, multi_scale, [1.0], 360.0),
            _step(DetectorTier.DOG, multi_scale, [1.0, 3.0, 6.0, 9.0], 360.0),
            _step(DetectorTier.HESSAFF, [1.0], [1.0, 2.0, 4.0, 6.0, 8.0], 360.0),
            _step(DetectorTier.HESSAFF, [1.0], [1.0, 2.0, 4.0, 6.0, 8.0], 120.0),
            _step(DetectorTier.HESSAFF, [1.0], [1.0, 2.0, 4.0, 6.0, 8.0, 10.0], 60.0),
        ])

    @classmethod
    def single(cls, step: StepConfig, theta_m: int = 15, ransac: Optional[RansacConfig] = None) -> "ModsConfig":
        """只含一步、不升级的计划"""
        return cls(steps=[step], theta_m=theta_m, ransac=ransac or RansacConfig())

    @classmethod
    def from_json_file(cls, path: str) -> "ModsConfig":
        """
        从 JSON 文件加载配置

        Raises:
            ConfigError: 文件不存在、不是合法 JSON 或校验失败
        """
        if not os.path.exists(path):
            raise ConfigError(f"配置文件不存在: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"配置文件不是合法 JSON: {e}") from e
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "ModsConfig":
        """校验字典形式的配置，失败时抛出 ConfigError"""
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"配置校验失败: {e}") from e


# ------------------------------
# 单检测器预设（易 / 中 / 难）
# ------------------------------
SINGLE_DETECTOR_PRESETS = {
    "HessAff-easy": _step(DetectorTier.HESSAFF, [1.0], [1.0, 5.0, 9.0], 360.0),
    "HessAff-medium": _step(DetectorTier.HESSAFF, [1.0], [1.0, 5.0, 9.0], 360.0),
    "HessAff-hard": _step(DetectorTier.HESSAFF, [1.0], [1.0, 2.0, 4.0, 6.0, 8.0], 60.0),
    "DoG-easy": _step(DetectorTier.DOG, [1.0], [1.0, 5.0, 9.0], 360.0),
    "DoG-medium": _step(DetectorTier.DOG, [1.0], [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0], 180.0),
    "DoG-hard": _step(DetectorTier.DOG, [1.0], [1.0, 2.0, 4.0, 6.0, 8.0], 60.0),
    "Fast-easy": _step(DetectorTier.FAST, [1.0], [1.0, 5.0, 9.0], 360.0),
    "Fast-medium": _step(DetectorTier.FAST, [1.0], [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0], 90.0),
    "Fast-hard": _step(DetectorTier.FAST, [1.0], [1.0, 2 ** 0.5, 2.0, 2 * 2 ** 0.5, 4.0, 4 * 2 ** 0.5, 8.0], 72.0),
    "DoG-plain": _step(DetectorTier.DOG, [1.0], [1.0], 360.0),
}
