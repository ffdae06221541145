"""
候选对应生成：FGINN 与 SNN

SNN 以最近邻与次近邻的距离比为准；FGINN 的分母换成第一个与最近邻中心相距
≥ n 像素（原图坐标）的近邻，对同一结构在多个合成视图中的重复检测不敏感。
"""

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from app.core.descriptors.base import DescribedFeature
from app.core.errors import KindMismatch
from app.core.matching.knn import DescriptorIndex
from app.schemas.config import DescriptorKind, MatchingConfig, MatchStrategy


@dataclass
class TentativeCorrespondence:
    """候选对应；index1/index2 为两侧特征列表中的位置"""
    feat1: DescribedFeature
    feat2: DescribedFeature
    distance_ratio: float
    prune_count: int = 0
    index1: int = -1
    index2: int = -1

    @property
    def p1(self) -> np.ndarray:
        return self.feat1.center

    @property
    def p2(self) -> np.ndarray:
        return self.feat2.center


def tc_records(tcs: List[TentativeCorrespondence]) -> List[List[float]]:
    """导出为 x1 y1 x2 y2 ratio prune_count"""
    return [[float(tc.p1[0]), float(tc.p1[1]), float(tc.p2[0]), float(tc.p2[1]),
             float(tc.distance_ratio), int(tc.prune_count)] for tc in tcs]


def _check_kind(feats1: List[DescribedFeature], feats2: List[DescribedFeature]) -> Optional[DescriptorKind]:
    kinds = {f.kind for f in feats1} | {f.kind for f in feats2}
    if len(kinds) > 1:
        raise KindMismatch("两侧描述子类型不一致")
    return kinds.pop() if kinds else None


def fginn_ratios(dists: np.ndarray, idx: np.ndarray, centers2: np.ndarray, radius: float,
                 k: int, pool_size: int) -> np.ndarray:
    """
    由 k+1 近邻表计算 FGINN 距离比

    只在前 k 个候选中找第一个远离最近邻的近邻；找不到时，池大于 k 则用第 k+1 近邻的距离作分母，
    否则整个池都与最近邻重合，距离比记为 0。

    Args:
        dists: (M, k') 距离，k' = min(k+1, pool_size)
        idx: (M, k') 池索引
        centers2: (pool_size, 2) 池中特征中心（原图坐标）
        radius: 几何不一致半径 n
        k: 扫描的候选数
        pool_size: 池大小

    Returns:
        (M,) 距离比
    """
    M = len(dists)
    ratios = np.zeros(M)
    if pool_size < 2:
        return ratios
    scan = min(k, pool_size)
    first = centers2[idx[:, 0]]
    far = np.linalg.norm(centers2[idx[:, 1:scan]] - first[:, None, :], axis=2) >= radius
    for m in range(M):
        hits = np.flatnonzero(far[m])
        if hits.size:
            denom = dists[m, hits[0] + 1]
        elif pool_size > k:
            denom = dists[m, k]
        else:
            continue
        ratios[m] = 1.0 if denom <= 0 else dists[m, 0] / denom
    return ratios


def snn_ratios(dists: np.ndarray, pool_size: int) -> np.ndarray:
    """最近邻 / 次近邻距离比，池小于 2 时为 0"""
    ratios = np.zeros(len(dists))
    if pool_size < 2:
        return ratios
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(dists[:, 1] > 0, dists[:, 0] / dists[:, 1], 1.0)
    return ratios


def _match(feats1: List[DescribedFeature], feats2: List[DescribedFeature], cfg: MatchingConfig,
           strategy: MatchStrategy) -> List[TentativeCorrespondence]:
    kind = _check_kind(feats1, feats2)
    if kind is None or not feats1 or not feats2:
        return []
    index = DescriptorIndex.from_features(feats2)
    queries = np.array([f.descriptor.data for f in feats1])
    dists, idx = index.query(queries, cfg.k_neighbors + 1)
    if strategy == MatchStrategy.SNN:
        ratios = snn_ratios(dists, index.size)
    else:
        centers2 = np.array([f.center for f in feats2])
        ratios = fginn_ratios(dists, idx, centers2, cfg.inconsistency_radius_px, cfg.k_neighbors, index.size)

    threshold = cfg.threshold_for(kind)
    out = []
    for m in np.flatnonzero(ratios <= threshold):
        j = int(idx[m, 0])
        out.append(TentativeCorrespondence(feat1=feats1[m], feat2=feats2[j], distance_ratio=float(ratios[m]),
                                           index1=int(m), index2=j))
    return out


def match_fginn(feats1: List[DescribedFeature], feats2: List[DescribedFeature],
                cfg: MatchingConfig) -> List[TentativeCorrespondence]:
    """
    FGINN 匹配

    Args:
        feats1: 图1特征（同一描述子类型）
        feats2: 图2特征
        cfg: 匹配参数

    Returns:
        距离比不超过阈值的候选对应，按 feats1 顺序
    """
    return _match(feats1, feats2, cfg, MatchStrategy.FGINN)


def match_snn(feats1: List[DescribedFeature], feats2: List[DescribedFeature],
              cfg: MatchingConfig) -> List[TentativeCorrespondence]:
    """SNN 匹配（对照基线）"""
    return _match(feats1, feats2, cfg, MatchStrategy.SNN)


def match_features(feats1: List[DescribedFeature], feats2: List[DescribedFeature],
                   cfg: MatchingConfig) -> List[TentativeCorrespondence]:
    """
    混合描述子类型的匹配：按类型分组分别匹配后拼接

    index1/index2 指向原始（未分组）列表中的位置。
    """
    groups1: Dict[DescriptorKind, List[int]] = {}
    groups2: Dict[DescriptorKind, List[int]] = {}
    for i, f in enumerate(feats1):
        groups1.setdefault(f.kind, []).append(i)
    for j, f in enumerate(feats2):
        groups2.setdefault(f.kind, []).append(j)

    out: List[TentativeCorrespondence] = []
    for kind in (DescriptorKind.BINARY, DescriptorKind.ROOT_SIFT):
        if kind not in groups1 or kind not in groups2:
            continue
        sub1 = [feats1[i] for i in groups1[kind]]
        sub2 = [feats2[j] for j in groups2[kind]]
        for tc in _match(sub1, sub2, cfg, cfg.strategy):
            tc.index1 = groups1[kind][tc.index1]
            tc.index2 = groups2[kind][tc.index2]
            out.append(tc)
    return out
