"""
重复候选对应过滤

两侧端点都在 radius 像素内的对应视为重复；按 (距离比, 索引) 顺序贪心保留，
被吸收的数量累加到保留者的 prune_count。
"""

from dataclasses import replace
from typing import List

import numpy as np
from scipy.spatial import cKDTree

from app.core.matching.fginn import TentativeCorrespondence


def filter_duplicates(tcs: List[TentativeCorrespondence], radius: float = 5.0) -> List[TentativeCorrespondence]:
    """
    贪心去重

    Args:
        tcs: 原图坐标下的候选对应
        radius: 聚类半径（像素）

    Returns:
        保留的对应（保持输入顺序，均为新对象）
    """
    if not tcs:
        return []
    p1 = np.array([tc.p1 for tc in tcs])
    p2 = np.array([tc.p2 for tc in tcs])
    tree = cKDTree(p1)
    order = sorted(range(len(tcs)), key=lambda i: (tcs[i].distance_ratio, i))

    removed = np.zeros(len(tcs), dtype=bool)
    absorbed = np.zeros(len(tcs), dtype=int)
    for i in order:
        if removed[i]:
            continue
        for j in tree.query_ball_point(p1[i], radius):
            if j == i or removed[j]:
                continue
            if np.linalg.norm(p2[j] - p2[i]) <= radius:
                removed[j] = True
                absorbed[i] += 1

    return [replace(tc, prune_count=tc.prune_count + int(absorbed[i]))
            for i, tc in enumerate(tcs) if not removed[i]]
