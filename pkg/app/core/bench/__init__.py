# 评测工具：合成倾斜、真值评分、难度分级、叠加图与运行器
from app.core.bench.difficulty import classify_difficulty, difficulty_table
from app.core.bench.overlay import render_overlay
from app.core.bench.runner import (
    CSV_COLUMNS,
    BenchCase,
    run_case,
    run_cases,
    run_pairs_bench,
    run_warp_bench,
    score_report_file,
)
from app.core.bench.scoring import SolveCriteria, score_correspondences
from app.core.bench.warp import LATITUDES, WarpCase, make_warp_series

__all__ = [
    "BenchCase",
    "CSV_COLUMNS",
    "LATITUDES",
    "SolveCriteria",
    "WarpCase",
    "classify_difficulty",
    "difficulty_table",
    "make_warp_series",
    "render_overlay",
    "run_case",
    "run_cases",
    "run_pairs_bench",
    "run_warp_bench",
    "score_correspondences",
    "score_report_file",
]
