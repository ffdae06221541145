"""
真值评分

对报告中通过 LAF 检查的对应按真值计算误差。误差计算与匹配器完全独立实现：
仿射/单应真值用前向与后向转移距离的平均值，基础矩阵真值用两侧点到极线距离平方和的平方根。
"""

from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field

from app.core.errors import MissingGroundTruth
from app.schemas.report import MatchReport, ScoreResult

SYNTHETIC_MIN_CORRECT = 50
REAL_MIN_CORRECT = 10
MEDIAN_EPIPOLAR_PX = 6.0


class SolveMode(str, Enum):
    GT_COUNT = "GtCorrespondenceCount"
    MEDIAN_EPIPOLAR = "MedianSymEpipolar"


class GroundTruthKind(str, Enum):
    AFFINE = "affine"
    HOMOGRAPHY = "homography"
    FUNDAMENTAL = "fundamental"


class SolveCriteria(BaseModel):
    """求解判据"""
    mode: SolveMode = Field(SolveMode.GT_COUNT, description="判据类型")
    gt_kind: GroundTruthKind = Field(GroundTruthKind.HOMOGRAPHY, description="真值类型")
    gt: Optional[List[List[float]]] = Field(None, description="真值矩阵（2×3 或 3×3）")
    min_correct: int = Field(SYNTHETIC_MIN_CORRECT, ge=1, description="最少正确对应数")
    correct_threshold_px: float = Field(1.0, gt=0, description="正确对应的误差阈值")
    median_threshold_px: float = Field(MEDIAN_EPIPOLAR_PX, gt=0, description="极线误差中位数阈值")

    @classmethod
    def synthetic(cls, affine: np.ndarray) -> "SolveCriteria":
        """合成扭曲：≥ 50 个真值一致对应"""
        return cls(gt_kind=GroundTruthKind.AFFINE, gt=np.asarray(affine, dtype=float).tolist())

    @classmethod
    def real_homography(cls, H: np.ndarray) -> "SolveCriteria":
        """平面真实图像对：≥ 10 个正确对应"""
        return cls(gt_kind=GroundTruthKind.HOMOGRAPHY, gt=np.asarray(H, dtype=float).tolist(),
                   min_correct=REAL_MIN_CORRECT)

    @classmethod
    def epipolar(cls, F: np.ndarray) -> "SolveCriteria":
        """三维场景：对称极线误差中位数 ≤ 6 像素"""
        return cls(mode=SolveMode.MEDIAN_EPIPOLAR, gt_kind=GroundTruthKind.FUNDAMENTAL,
                   gt=np.asarray(F, dtype=float).tolist(), min_correct=REAL_MIN_CORRECT)


def _as_3x3(gt: List[List[float]]) -> np.ndarray:
    M = np.asarray(gt, dtype=float)
    if M.shape == (2, 3):
        M = np.vstack([M, [0.0, 0.0, 1.0]])
    if M.shape != (3, 3):
        raise MissingGroundTruth(f"真值矩阵形状错误: {M.shape}")
    return M


def transfer_errors(H: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """前向 |H·x1 - x2| 与后向 |H⁻¹·x2 - x1| 的平均值"""
    def project(M, pts):
        out = []
        for x, y in pts:
            u, v, w = M @ np.array([x, y, 1.0])
            out.append((u / w, v / w) if abs(w) > 1e-15 else (np.inf, np.inf))
        return np.array(out, dtype=float).reshape(-1, 2)

    forward = np.hypot(*(project(H, x1) - x2).T)
    backward = np.hypot(*(project(np.linalg.inv(H), x2) - x1).T)
    return 0.5 * (forward + backward)


def epipolar_errors(F: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """√(d(x2, F·x1)² + d(x1, Fᵀ·x2)²)，无法定义的极线记为 inf"""
    errors = []
    for (a, b), (c, d) in zip(x1, x2):
        p = np.array([a, b, 1.0])
        q = np.array([c, d, 1.0])
        line2 = F @ p
        line1 = F.T @ q
        n2 = line2[0] ** 2 + line2[1] ** 2
        n1 = line1[0] ** 2 + line1[1] ** 2
        if n1 == 0.0 or n2 == 0.0:
            errors.append(np.inf)
            continue
        residual = float(q @ line2)
        errors.append(np.sqrt(residual ** 2 / n2 + residual ** 2 / n1))
    return np.array(errors, dtype=float)


def score_correspondences(report: MatchReport, crit: SolveCriteria) -> ScoreResult:
    """
    按判据为报告评分

    Args:
        report: 匹配报告
        crit: 求解判据（必须带真值）

    Returns:
        ScoreResult

    Raises:
        MissingGroundTruth: 判据没有真值
    """
    if crit.gt is None:
        raise MissingGroundTruth("评分需要真值矩阵")
    M = _as_3x3(crit.gt)
    records = report.verified
    if not records:
        return ScoreResult(solved=False, correct_count=0, total=0, median_error=None)

    x1 = np.array([[c.x1, c.y1] for c in records])
    x2 = np.array([[c.x2, c.y2] for c in records])
    if crit.gt_kind == GroundTruthKind.FUNDAMENTAL:
        errors = epipolar_errors(M, x1, x2)
    else:
        errors = transfer_errors(M, x1, x2)

    correct = int(np.sum(errors <= crit.correct_threshold_px))
    median = float(np.median(errors))
    if crit.mode == SolveMode.MEDIAN_EPIPOLAR:
        solved = median <= crit.median_threshold_px
    else:
        solved = correct >= crit.min_correct
    return ScoreResult(solved=bool(solved), correct_count=correct, total=len(records), median_error=median)
