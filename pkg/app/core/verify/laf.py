"""
局部仿射帧（LAF）一致性检查

只有中心点满足模型还不够：把两侧帧椭圆上离中心最近和最远的点也按模型对应起来，
任一点的误差超过 laf_factor × 内点阈值就丢弃该对应。
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from app.core.geometry import GeometryModel, ModelKind
from app.core.verify.solvers.homography import homography_errors
from app.schemas.config import RansacConfig


@dataclass
class VerifiedResult:
    """LAF 检查后的结果，inliers_after_laf 为候选对应下标"""
    model: GeometryModel
    inliers_after_laf: List[int] = field(default_factory=list)
    discarded_by_laf: int = 0

    @property
    def n_matches(self) -> int:
        return len(self.inliers_after_laf)


def extremal_points(center: np.ndarray, laf: np.ndarray) -> np.ndarray:
    """
    椭圆 {c + laf·u : |u| = 1} 上的最远点和最近点

    Returns:
        (2,2) 行分别为长轴端点和短轴端点
    """
    _, _, Vt = np.linalg.svd(laf)
    return center[None, :] + (laf @ Vt.T).T


def _matched_extremal_points(tc) -> np.ndarray:
    """两侧帧在同一单位圆方向上的点，返回 (2, 4)：x1 y1 x2 y2"""
    laf1 = tc.feat1.laf
    _, _, Vt = np.linalg.svd(laf1)
    pts1 = tc.p1[None, :] + Vt @ laf1.T
    pts2 = tc.p2[None, :] + Vt @ tc.feat2.laf.T
    return np.hstack([pts1, pts2])


def _epipolar_distances(F: np.ndarray, p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """点到对侧极线距离的较大值"""
    x1 = np.c_[p1, np.ones(len(p1))]
    x2 = np.c_[p2, np.ones(len(p2))]
    l2 = x1 @ F.T
    l1 = x2 @ F
    alg = np.abs(np.sum(x2 * l2, axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        d2 = alg / np.hypot(l2[:, 0], l2[:, 1])
        d1 = alg / np.hypot(l1[:, 0], l1[:, 1])
    d = np.maximum(d1, d2)
    d[~np.isfinite(d)] = np.inf
    return d


def laf_errors(tcs: Sequence, model: GeometryModel) -> np.ndarray:
    """
    每个对应两对极值点的最大误差

    Args:
        tcs: 候选对应
        model: 单应或基础矩阵模型

    Returns:
        (N,) 误差（像素）
    """
    if not tcs:
        return np.zeros(0)
    pts = np.vstack([_matched_extremal_points(tc) for tc in tcs])
    M = np.asarray(model.matrix, dtype=np.float64)
    if model.kind == ModelKind.FUNDAMENTAL:
        err = _epipolar_distances(M, pts[:, :2], pts[:, 2:])
    else:
        err = homography_errors(M, pts[:, :2], pts[:, 2:])
    return err.reshape(-1, 2).max(axis=1)


def laf_check(tcs: Sequence, model: GeometryModel, cfg: Optional[RansacConfig] = None) -> VerifiedResult:
    """
    对模型内点做 LAF 检查

    Args:
        tcs: 候选对应（model.inliers 为其下标）
        model: auto_model 的输出
        cfg: RANSAC 参数，提供阈值和 laf_factor

    Returns:
        VerifiedResult，inliers_after_laf ⊆ model.inliers，保持原有顺序
    """
    cfg = cfg or RansacConfig()
    threshold = cfg.f_threshold_px if model.kind == ModelKind.FUNDAMENTAL else cfg.h_threshold_px
    limit = cfg.laf_factor * threshold
    idx = list(model.inliers)
    if not idx:
        return VerifiedResult(model=model)
    err = laf_errors([tcs[i] for i in idx], model)
    kept = [i for i, e in zip(idx, err) if e <= limit]
    return VerifiedResult(model=model, inliers_after_laf=kept, discarded_by_laf=len(idx) - len(kept))
