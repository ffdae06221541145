# 近邻搜索、FGINN/SNN 与重复过滤
from app.core.matching.duplicates import filter_duplicates
from app.core.matching.fginn import (
    TentativeCorrespondence,
    match_features,
    match_fginn,
    match_snn,
    tc_records,
)
from app.core.matching.knn import DescriptorIndex, knn_search

__all__ = [
    "DescriptorIndex",
    "TentativeCorrespondence",
    "filter_duplicates",
    "knn_search",
    "match_features",
    "match_fginn",
    "match_snn",
    "tc_records",
]
