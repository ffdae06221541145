"""
评测运行器

- run_warp_bench：对目录中的每幅纹理图生成倾斜序列，逐配置匹配并按真值评分
- run_pairs_bench：对带真值（H.txt / F.txt / camera.json）的图像对目录评测
- score_report_file：对已有的报告 JSON 重新评分

用例在线程池中并行执行，每个用例的报告原子地写成 JSON，全部完成后汇总为 CSV。
"""

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm.contrib.concurrent import thread_map

from app.core.bench.difficulty import difficulty_table
from app.core.bench.scoring import GroundTruthKind, SolveCriteria, score_correspondences
from app.core.bench.warp import LATITUDES, make_warp_series
from app.core.errors import DegenerateJacobian, MissingGroundTruth, ModsError, NoSolution
from app.core.geometry import TurntableCamera, transition_tilt, turntable_fundamental
from app.core.imgproc import Image, load_image
from app.core.logging_utils import log_info, log_section_end, log_section_start, log_success, log_warning
from app.core.orchestrator import run_mods
from app.schemas.config import ModsConfig
from app.schemas.report import MatchReport

CSV_COLUMNS = ["pair_id", "config_id", "solved", "step", "inliers", "correct", "median_err_px",
               "ms_total", "ms_synth", "ms_detect", "ms_describe", "ms_match", "ms_verify"]
IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".pgm", ".ppm", ".bmp", ".tif", ".tiff")


@dataclass
class BenchCase:
    """一个待评测的图像对"""
    pair_id: str
    config_id: str
    image1: Image
    image2: Image
    config: ModsConfig
    criteria: SolveCriteria
    latitude: Optional[float] = None
    tau: Optional[float] = None


def write_json_atomic(path: str, payload: dict) -> None:
    """临时文件 + os.replace 原子写入"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2)
    os.replace(tmp, path)


def _safe_name(text: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in text)


def run_case(case: BenchCase, report_dir: Optional[str] = None, seed: Optional[int] = None) -> Dict[str, object]:
    """
    执行一个用例并评分

    Returns:
        CSV 的一行（外加 latitude/tau 辅助列）
    """
    try:
        report = run_mods(case.image1, case.image2, case.config, threads=1, seed=seed)
    except NoSolution as e:
        report = e.report if e.report is not None else MatchReport()

    score = score_correspondences(report, case.criteria)
    if report_dir:
        name = _safe_name(f"{case.pair_id}__{case.config_id}") + ".json"
        write_json_atomic(os.path.join(report_dir, name),
                          {"report": report.model_dump(mode="json"), "score": score.model_dump(mode="json")})

    totals = report.stage_totals()
    return {
        "pair_id": case.pair_id,
        "config_id": case.config_id,
        "solved": bool(score.solved),
        "step": report.step,
        "inliers": report.n_matches,
        "correct": score.correct_count,
        "median_err_px": score.median_error if score.median_error is not None else float("nan"),
        "ms_total": report.ms_total,
        "ms_synth": totals["synth"],
        "ms_detect": totals["detect"],
        "ms_describe": totals["describe"],
        "ms_match": totals["match"],
        "ms_verify": totals["verify"],
        "latitude": case.latitude,
        "tau": case.tau,
    }


def run_cases(cases: Sequence[BenchCase], threads: int = 1, report_dir: Optional[str] = None,
              seed: Optional[int] = None, desc: str = "评测") -> pd.DataFrame:
    """并行执行用例，返回保持用例顺序的结果表"""
    rows = thread_map(lambda case: run_case(case, report_dir, seed), list(cases),
                      max_workers=max(1, threads), desc=desc)
    return pd.DataFrame(rows, columns=CSV_COLUMNS + ["latitude", "tau"])


def list_images(directory: str) -> List[Path]:
    """目录下按文件名排序的图像文件"""
    root = Path(directory)
    if not root.is_dir():
        raise ModsError(f"目录不存在: {directory}")
    return sorted(p for p in root.iterdir() if p.suffix.lower() in IMAGE_EXTENSIONS)


def _report_dir(out_csv: str) -> str:
    return os.path.splitext(out_csv)[0] + "_reports"


def run_warp_bench(image_dir: str, configs: Dict[str, ModsConfig], out_csv: str, threads: int = 1,
                   latitudes: Sequence[float] = LATITUDES, seed: Optional[int] = None) -> pd.DataFrame:
    """
    合成倾斜评测

    Args:
        image_dir: 纹理图目录
        configs: config_id → 配置
        out_csv: 结果 CSV 路径；同时写 <out>_difficulty.csv 与 <out>_reports/
        threads: 并行用例数
        latitudes: 纬度列表（度）
        seed: RANSAC 随机种子

    Returns:
        结果表
    """
    log_section_start("合成倾斜评测")
    cases: List[BenchCase] = []
    for path in list_images(image_dir):
        source = load_image(str(path))
        for warp in make_warp_series(source, latitudes):
            crit = SolveCriteria.synthetic(warp.affine)
            for config_id, cfg in configs.items():
                cases.append(BenchCase(pair_id=f"{path.stem}@{warp.latitude:g}", config_id=config_id,
                                       image1=source, image2=warp.warped, config=cfg, criteria=crit,
                                       latitude=warp.latitude))
    log_info(f"图像目录: {image_dir}，用例数: {len(cases)}")

    results = run_cases(cases, threads, _report_dir(out_csv), seed, desc="倾斜评测")
    os.makedirs(os.path.dirname(os.path.abspath(out_csv)), exist_ok=True)
    results[CSV_COLUMNS].to_csv(out_csv, index=False)
    difficulty = difficulty_table(results)
    difficulty_csv = os.path.splitext(out_csv)[0] + "_difficulty.csv"
    difficulty.to_csv(difficulty_csv, index=False)

    log_success(f"求解 {int(results['solved'].sum())}/{len(results)}，结果已写入 {out_csv}")
    log_section_end()
    return results


def load_pair_criteria(pair_dir: Path) -> SolveCriteria:
    """
    读取图像对目录中的真值

    Raises:
        MissingGroundTruth: 没有 H.txt / F.txt / camera.json
    """
    if (pair_dir / "H.txt").exists():
        return SolveCriteria.real_homography(np.loadtxt(pair_dir / "H.txt").reshape(3, 3))
    if (pair_dir / "F.txt").exists():
        return SolveCriteria.epipolar(np.loadtxt(pair_dir / "F.txt").reshape(3, 3))
    if (pair_dir / "camera.json").exists():
        with open(pair_dir / "camera.json", "r", encoding="utf-8") as f:
            camera = TurntableCamera(**json.load(f))
        return SolveCriteria.epipolar(turntable_fundamental(camera).matrix)
    raise MissingGroundTruth(f"{pair_dir} 中没有真值文件")


def _find_image(pair_dir: Path, stem: str) -> Path:
    for path in sorted(pair_dir.iterdir()):
        if path.stem == stem and path.suffix.lower() in IMAGE_EXTENSIONS:
            return path
    raise ModsError(f"{pair_dir} 中没有 {stem} 图像")


def _center_tau(crit: SolveCriteria, img: Image) -> Optional[float]:
    if crit.gt_kind != GroundTruthKind.HOMOGRAPHY:
        return None
    try:
        return transition_tilt(np.asarray(crit.gt), ((img.width - 1) / 2.0, (img.height - 1) / 2.0))
    except DegenerateJacobian:
        return math.inf


def run_pairs_bench(pairs_dir: str, cfg: ModsConfig, out_csv: str, threads: int = 1,
                    config_id: str = "MODS", seed: Optional[int] = None) -> pd.DataFrame:
    """
    真实图像对评测：每个子目录包含 img1.*、img2.* 与一个真值文件

    Returns:
        结果表（含 tau 列）
    """
    log_section_start("图像对评测")
    cases: List[BenchCase] = []
    for pair_dir in sorted(p for p in Path(pairs_dir).iterdir() if p.is_dir()):
        try:
            crit = load_pair_criteria(pair_dir)
        except MissingGroundTruth as e:
            log_warning(str(e))
            continue
        img1 = load_image(str(_find_image(pair_dir, "img1")))
        img2 = load_image(str(_find_image(pair_dir, "img2")))
        cases.append(BenchCase(pair_id=pair_dir.name, config_id=config_id, image1=img1, image2=img2,
                               config=cfg, criteria=crit, tau=_center_tau(crit, img1)))
    log_info(f"图像对数: {len(cases)}")

    results = run_cases(cases, threads, _report_dir(out_csv), seed, desc="图像对评测")
    os.makedirs(os.path.dirname(os.path.abspath(out_csv)), exist_ok=True)
    results[CSV_COLUMNS + ["tau"]].to_csv(out_csv, index=False)
    log_success(f"求解 {int(results['solved'].sum())}/{len(results)}，结果已写入 {out_csv}")
    log_section_end()
    return results


def score_report_file(report_path: str, gt_path: str, kind: str = "homography",
                      min_correct: Optional[int] = None):
    """
    对报告 JSON 重新评分

    Args:
        report_path: run_mods 报告或 bench 用例 JSON（含 "report" 键）
        gt_path: 3×3（或 2×3）真值矩阵文本文件
        kind: homography / affine / fundamental
        min_correct: 覆盖最少正确对应数

    Returns:
        ScoreResult
    """
    with open(report_path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    report = MatchReport.model_validate(payload.get("report", payload))
    gt = np.loadtxt(gt_path)
    if kind == "fundamental":
        crit = SolveCriteria.epipolar(gt.reshape(3, 3))
    elif kind == "affine":
        crit = SolveCriteria.synthetic(gt.reshape(2, 3) if gt.size == 6 else gt.reshape(3, 3))
    else:
        crit = SolveCriteria.real_homography(gt.reshape(3, 3))
    if min_correct is not None:
        crit = crit.model_copy(update={"min_correct": int(min_correct)})
    return score_correspondences(report, crit)
