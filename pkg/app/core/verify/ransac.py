"""
LO-RANSAC 几何验证

带局部优化的 RANSAC：每当出现新的最佳假设，就在其内点上用最小二乘解重拟合若干轮，
支持数不下降才接受。随机数生成器由配置中的种子初始化，同一输入得到同一结果。

对外提供：
- estimate_homography / estimate_fundamental：对候选对应列表估计单一模型
- auto_model：先估计基础矩阵，若其内点几乎都满足某个单应则返回单应
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.errors import InsufficientCorrespondences, NoModel
from app.core.geometry import GeometryModel, ModelKind, normalize_model
from app.core.logging_utils import log_debug
from app.core.verify.solvers import (
    dlt_homography,
    eight_point,
    homography_errors,
    homography_minimal,
    sampson_errors,
    seven_point,
)
from app.schemas.config import RansacConfig

MinimalSolver = Callable[[np.ndarray, np.ndarray], List[np.ndarray]]
RefitSolver = Callable[[np.ndarray, np.ndarray], Optional[np.ndarray]]
ErrorFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ModelSolver:
    """一类模型的最小解、重拟合与误差函数"""
    kind: ModelKind
    sample_size: int
    minimal: MinimalSolver
    refit: RefitSolver
    errors: ErrorFn


HOMOGRAPHY_SOLVER = ModelSolver(ModelKind.HOMOGRAPHY, 4, homography_minimal, dlt_homography, homography_errors)
FUNDAMENTAL_SOLVER = ModelSolver(ModelKind.FUNDAMENTAL, 7, seven_point, eight_point, sampson_errors)


@dataclass
class _Hypothesis:
    matrix: np.ndarray
    inliers: np.ndarray
    count: int
    sse: float

    def better_than(self, other: Optional["_Hypothesis"]) -> bool:
        # 先比支持数，再比内点误差平方和；完全相同时保留较早的假设
        if other is None:
            return True
        if self.count != other.count:
            return self.count > other.count
        return self.sse < other.sse


def _score(solver: ModelSolver, M: np.ndarray, p1: np.ndarray, p2: np.ndarray,
           threshold: float) -> _Hypothesis:
    err = solver.errors(M, p1, p2)
    inliers = err <= threshold
    return _Hypothesis(M, inliers, int(inliers.sum()), float(np.sum(err[inliers] ** 2)))


def required_iterations(inlier_ratio: float, sample_size: int, confidence: float, cap: int) -> int:
    """
    自适应迭代次数 log(1-p) / log(1-w^s)

    Args:
        inlier_ratio: 当前最佳内点率 w
        sample_size: 最小样本大小 s
        confidence: 置信度 p
        cap: 上限

    Returns:
        需要的总迭代次数
    """
    if inlier_ratio <= 0:
        return cap
    if inlier_ratio >= 1:
        return 1
    good = inlier_ratio ** sample_size
    if good <= 0:
        return cap
    denom = math.log(1.0 - good)
    if denom >= 0:
        return cap
    return min(cap, int(math.ceil(math.log(1.0 - confidence) / denom)))


def _local_optimize(solver: ModelSolver, best: _Hypothesis, p1: np.ndarray, p2: np.ndarray,
                    threshold: float, rounds: int) -> _Hypothesis:
    for _ in range(rounds):
        idx = np.flatnonzero(best.inliers)
        M = solver.refit(p1[idx], p2[idx])
        if M is None:
            break
        candidate = _score(solver, M, p1, p2, threshold)
        if not candidate.better_than(best):
            break
        best = candidate
    return best


def lo_ransac(solver: ModelSolver, p1: np.ndarray, p2: np.ndarray, threshold: float,
              cfg: RansacConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    通用 LO-RANSAC

    Args:
        solver: 模型求解器
        p1: (N,2) 图1点
        p2: (N,2) 图2点
        threshold: 内点阈值（像素）
        cfg: RANSAC 参数

    Returns:
        (模型矩阵, 内点布尔掩码, 全部对应的误差)

    Raises:
        InsufficientCorrespondences: N 小于最小样本
        NoModel: 没有假设达到最小样本大小的支持
    """
    p1 = np.asarray(p1, dtype=np.float64).reshape(-1, 2)
    p2 = np.asarray(p2, dtype=np.float64).reshape(-1, 2)
    n = len(p1)
    s = solver.sample_size
    if n < s:
        raise InsufficientCorrespondences(f"{solver.kind.value} 至少需要 {s} 个对应，当前 {n}")

    rng = np.random.default_rng(cfg.rng_seed)
    best: Optional[_Hypothesis] = None
    needed = cfg.max_iterations
    iteration = 0
    while iteration < min(needed, cfg.max_iterations):
        iteration += 1
        sample = rng.choice(n, size=s, replace=False)
        for M in solver.minimal(p1[sample], p2[sample]):
            hyp = _score(solver, M, p1, p2, threshold)
            if hyp.better_than(best):
                best = _local_optimize(solver, hyp, p1, p2, threshold, cfg.lo_refit_rounds)
                needed = required_iterations(best.count / n, s, cfg.confidence, cfg.max_iterations)

    if best is None or best.count < s:
        raise NoModel(f"{solver.kind.value} 未找到支持数 ≥ {s} 的模型（{iteration} 次迭代）")
    log_debug(f"{solver.kind.value}: {best.count}/{n} 内点, {iteration} 次迭代", indent=1)
    return best.matrix, best.inliers, solver.errors(best.matrix, p1, p2)


def _points(tcs: Sequence) -> Tuple[np.ndarray, np.ndarray]:
    if not tcs:
        return np.zeros((0, 2)), np.zeros((0, 2))
    return np.array([tc.p1 for tc in tcs], dtype=np.float64), np.array([tc.p2 for tc in tcs], dtype=np.float64)


def _to_model(kind: ModelKind, M: np.ndarray, inliers: np.ndarray, errors: np.ndarray) -> GeometryModel:
    idx = np.flatnonzero(inliers)
    return GeometryModel(kind=kind, matrix=normalize_model(M, kind),
                         inliers=[int(i) for i in idx], residuals=[float(e) for e in errors[idx]])


def estimate_points(solver: ModelSolver, p1: np.ndarray, p2: np.ndarray, threshold: float,
                    cfg: RansacConfig) -> GeometryModel:
    """对点数组估计模型，inliers 为点下标"""
    M, inliers, errors = lo_ransac(solver, p1, p2, threshold, cfg)
    return _to_model(solver.kind, M, inliers, errors)


def estimate_homography(tcs: Sequence, cfg: Optional[RansacConfig] = None) -> GeometryModel:
    """
    单应 LO-RANSAC

    Args:
        tcs: 候选对应（需要 p1/p2 属性）
        cfg: RANSAC 参数

    Returns:
        GeometryModel，inliers 为 tcs 下标
    """
    cfg = cfg or RansacConfig()
    p1, p2 = _points(tcs)
    return estimate_points(HOMOGRAPHY_SOLVER, p1, p2, cfg.h_threshold_px, cfg)


def estimate_fundamental(tcs: Sequence, cfg: Optional[RansacConfig] = None) -> GeometryModel:
    """基础矩阵 LO-RANSAC（7 点最小解、8 点重拟合、Sampson 误差）"""
    cfg = cfg or RansacConfig()
    p1, p2 = _points(tcs)
    return estimate_points(FUNDAMENTAL_SOLVER, p1, p2, cfg.f_threshold_px, cfg)


def auto_model(tcs: Sequence, cfg: Optional[RansacConfig] = None) -> GeometryModel:
    """
    自动选择单应或基础矩阵

    N < 7 时只能估计单应；否则先估计基础矩阵，再在其内点上估计单应，
    单应支持数达到 h_degeneracy_ratio × F 支持数时判定为平面（或纯旋转）场景，
    返回在全部对应上重新评估内点的单应。

    Raises:
        InsufficientCorrespondences: N < 4
        NoModel: 两种模型都失败
    """
    cfg = cfg or RansacConfig()
    n = len(tcs)
    if n < 4:
        raise InsufficientCorrespondences(f"至少需要 4 个候选对应，当前 {n}")
    if n < 7:
        return estimate_homography(tcs, cfg)

    p1, p2 = _points(tcs)
    try:
        f_model = estimate_points(FUNDAMENTAL_SOLVER, p1, p2, cfg.f_threshold_px, cfg)
    except NoModel:
        log_debug("基础矩阵估计失败，退回单应", indent=1)
        return estimate_homography(tcs, cfg)

    f_idx = np.array(f_model.inliers, dtype=int)
    if len(f_idx) >= 4:
        try:
            H, h_inliers, _ = lo_ransac(HOMOGRAPHY_SOLVER, p1[f_idx], p2[f_idx], cfg.h_threshold_px, cfg)
        except NoModel:
            return f_model
        if int(h_inliers.sum()) >= cfg.h_degeneracy_ratio * len(f_idx):
            errors = homography_errors(H, p1, p2)
            log_debug(f"F 内点中 {int(h_inliers.sum())}/{len(f_idx)} 满足单应，返回单应", indent=1)
            return _to_model(ModelKind.HOMOGRAPHY, H, errors <= cfg.h_threshold_px, errors)
    return f_model
