"""
难度分级

某配置在某纬度上的求解比例 f：f ≥ 0.99 为 hard，≥ 0.90 为 medium，≥ 0.50 为 easy，否则 unsolved。
"""

import pandas as pd

from app.core.errors import DomainError

LEVELS = ((0.99, "hard"), (0.90, "medium"), (0.50, "easy"))


def classify_difficulty(fraction: float) -> str:
    """
    返回满足的最高等级

    Raises:
        DomainError: f 不在 [0, 1] 内
    """
    if not 0.0 <= fraction <= 1.0:
        raise DomainError(f"求解比例必须在 [0, 1] 内，得到 {fraction}")
    for threshold, label in LEVELS:
        if fraction >= threshold:
            return label
    return "unsolved"


def difficulty_table(results: pd.DataFrame) -> pd.DataFrame:
    """
    按 (config_id, latitude) 汇总求解比例与等级

    Args:
        results: 至少包含 config_id、latitude、solved 三列

    Returns:
        列为 config_id, latitude, fraction_solved, label 的表
    """
    if results.empty:
        return pd.DataFrame(columns=["config_id", "latitude", "fraction_solved", "label"])
    table = (results.groupby(["config_id", "latitude"], sort=True)["solved"]
             .mean()
             .rename("fraction_solved")
             .reset_index())
    table["label"] = table["fraction_solved"].map(classify_difficulty)
    return table
