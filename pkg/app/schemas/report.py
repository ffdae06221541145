from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CorrespondenceRecord(BaseModel):
    """模型内点对应（原图坐标）"""
    x1: float = Field(..., description="图1 x")
    y1: float = Field(..., description="图1 y")
    x2: float = Field(..., description="图2 x")
    y2: float = Field(..., description="图2 y")
    distance_ratio: float = Field(0.0, description="FGINN/SNN 距离比")
    prune_count: int = Field(0, ge=0, description="去重时吸收的重复对应数")
    laf_consistent: bool = Field(True, description="是否通过 LAF 检查")
    residual_px: float = Field(0.0, ge=0, description="模型误差（像素）")


class StepTiming(BaseModel):
    """单个 MODS 步骤的统计与各阶段耗时（毫秒）"""
    step: int = Field(..., ge=1, description="步骤序号（从 1 开始）")
    views: int = Field(0, ge=0, description="两幅图本步合成的视图数")
    view_area: int = Field(0, ge=0, description="本步合成视图的像素总数")
    features1: int = Field(0, ge=0, description="图1 累计特征数")
    features2: int = Field(0, ge=0, description="图2 累计特征数")
    tentatives: int = Field(0, ge=0, description="去重后的候选对应数")
    inliers: int = Field(0, ge=0, description="LAF 检查后的内点数")
    laf_discarded: int = Field(0, ge=0, description="LAF 检查剔除数")
    model_kind: Optional[str] = Field(None, description="本步得到的模型类型")
    ms_synth: float = Field(0.0, ge=0)
    ms_detect: float = Field(0.0, ge=0)
    ms_describe: float = Field(0.0, ge=0)
    ms_match: float = Field(0.0, ge=0)
    ms_verify: float = Field(0.0, ge=0)
    ms_total: float = Field(0.0, ge=0, description="本步墙钟时间")

    def stage_ms(self) -> Dict[str, float]:
        return {
            "synth": self.ms_synth,
            "detect": self.ms_detect,
            "describe": self.ms_describe,
            "match": self.ms_match,
            "verify": self.ms_verify,
        }


class MatchReport(BaseModel):
    """MODS 匹配结果"""
    solved: bool = Field(False, description="LAF 检查后的内点数是否达到 θm")
    step: int = Field(0, ge=0, description="停止时（或最佳尝试所在）的步骤序号，0 表示没有模型")
    steps_executed: int = Field(0, ge=0, description="实际执行的步骤数")
    model_kind: Optional[str] = Field(None, description="Homography 或 Fundamental")
    model: Optional[List[float]] = Field(None, description="模型矩阵 9 个元素（行优先）")
    n_matches: int = Field(0, ge=0, description="LAF 检查后的内点数")
    correspondences: List[CorrespondenceRecord] = Field(default_factory=list, description="模型内点")
    timings: List[StepTiming] = Field(default_factory=list, description="逐步耗时")
    config: Optional[Dict[str, Any]] = Field(None, description="配置回显")

    @property
    def verified(self) -> List[CorrespondenceRecord]:
        """通过 LAF 检查的对应"""
        return [c for c in self.correspondences if c.laf_consistent]

    @property
    def ms_total(self) -> float:
        return sum(t.ms_total for t in self.timings)

    def stage_totals(self) -> Dict[str, float]:
        """各阶段在所有步骤上的累计耗时"""
        totals = {"synth": 0.0, "detect": 0.0, "describe": 0.0, "match": 0.0, "verify": 0.0}
        for timing in self.timings:
            for name, value in timing.stage_ms().items():
                totals[name] += value
        return totals


class ScoreResult(BaseModel):
    """真值评分结果"""
    solved: bool = Field(..., description="是否满足求解判据")
    correct_count: int = Field(0, ge=0, description="正确对应数")
    total: int = Field(0, ge=0, description="参与评分的对应数")
    median_error: Optional[float] = Field(None, description="误差中位数（像素）")
