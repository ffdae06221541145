"""
描述子近邻搜索

RootSift 用 scipy 的 cKDTree 做精确欧氏 k 近邻；Binary 用解包后的位向量
分块计算汉明距离。两种情况下距离相等时按池内索引排序。
"""

from typing import List, Tuple

import numpy as np
from scipy.spatial import cKDTree

from app.core.descriptors.base import DescribedFeature, Descriptor
from app.core.errors import KindMismatch
from app.schemas.config import DescriptorKind

QUERY_CHUNK = 512
TIE_MARGIN = 4


def _stable_rows(dists: np.ndarray, idx: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """每行按 (距离, 索引) 排序后截取前 k 个"""
    order = np.lexsort((idx, dists), axis=-1)
    rows = np.arange(dists.shape[0])[:, None]
    return dists[rows, order][:, :k], idx[rows, order][:, :k]


class DescriptorIndex:
    """
    单一描述子类型的近邻索引

    构建后只读，可被多个线程同时查询。
    """

    def __init__(self, data: np.ndarray, kind: DescriptorKind):
        self.kind = kind
        self.size = len(data)
        if kind == DescriptorKind.BINARY:
            bits = np.unpackbits(np.asarray(data, dtype=np.uint8).reshape(self.size, -1), axis=1)
            self._bits = bits.astype(np.float32)
            self._counts = self._bits.sum(axis=1)
            self._tree = None
        else:
            self._tree = cKDTree(np.asarray(data, dtype=np.float64).reshape(self.size, -1))

    @classmethod
    def from_features(cls, features: List[DescribedFeature]) -> "DescriptorIndex":
        if not features:
            raise ValueError("近邻索引不能为空")
        kind = features[0].kind
        if any(f.kind != kind for f in features):
            raise KindMismatch("索引中混有不同类型的描述子")
        return cls(np.array([f.descriptor.data for f in features]), kind)

    def query(self, queries: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        批量 k 近邻

        Args:
            queries: (M, D) 与索引同类型的描述子数据
            k: 近邻数

        Returns:
            (距离 (M, k'), 索引 (M, k'))，k' = min(k, 池大小)
        """
        k_eff = min(k, self.size)
        if len(queries) == 0:
            return np.zeros((0, k_eff)), np.zeros((0, k_eff), dtype=int)
        if self.kind == DescriptorKind.BINARY:
            return self._query_hamming(np.asarray(queries, dtype=np.uint8), k_eff)
        return self._query_euclidean(np.asarray(queries, dtype=np.float64), k_eff)

    def _query_euclidean(self, queries: np.ndarray, k: int):
        k_search = min(self.size, k + TIE_MARGIN)
        dists, idx = self._tree.query(queries, k=k_search)
        dists = np.asarray(dists, dtype=np.float64).reshape(len(queries), k_search)
        idx = np.asarray(idx, dtype=int).reshape(len(queries), k_search)
        return _stable_rows(dists, idx, k)

    def _query_hamming(self, queries: np.ndarray, k: int):
        qbits = np.unpackbits(queries.reshape(len(queries), -1), axis=1).astype(np.float32)
        qcounts = qbits.sum(axis=1)
        all_d, all_i = [], []
        for start in range(0, len(qbits), QUERY_CHUNK):
            block = qbits[start:start + QUERY_CHUNK]
            dist = qcounts[start:start + QUERY_CHUNK, None] + self._counts[None, :] - 2.0 * (block @ self._bits.T)
            dist = np.rint(dist).astype(np.float64)
            order = np.argsort(dist, axis=1, kind="stable")[:, :k]
            rows = np.arange(len(block))[:, None]
            all_d.append(dist[rows, order])
            all_i.append(order)
        return np.vstack(all_d), np.vstack(all_i)


def knn_search(query: Descriptor, pool: List[DescribedFeature], k: int) -> List[Tuple[int, float]]:
    """
    单个描述子在池中的 k 近邻

    Args:
        query: 查询描述子
        pool: 非空特征池
        k: 近邻数

    Returns:
        [(池索引, 距离)]，按距离升序，距离相同按索引

    Raises:
        KindMismatch: 描述子类型不一致
    """
    if not pool:
        raise ValueError("特征池为空")
    if any(f.kind != query.kind for f in pool):
        raise KindMismatch(f"查询类型 {query.kind.value} 与特征池不一致")
    index = DescriptorIndex.from_features(pool)
    dists, idx = index.query(np.asarray(query.data)[None], k)
    return [(int(i), float(d)) for i, d in zip(idx[0], dists[0])]
