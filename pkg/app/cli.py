#!/usr/bin/env python3
"""
命令行入口

  python -m app.cli match img1.png img2.png [--config FILE] [--out report.json] [--overlay out.png]
  python -m app.cli bench warp <图像目录> --out results.csv [--config FILE] [--preset NAME ...]
  python -m app.cli bench pairs <图像对目录> --out results.csv
  python -m app.cli bench score report.json --gt H.txt
  python -m app.cli config

日志写到 stderr，结果 JSON 写到 stdout。
"""

import argparse
import json
import sys
from typing import Dict, List, Optional

from app.core.bench import LATITUDES, render_overlay, run_pairs_bench, run_warp_bench, score_report_file
from app.core.bench.runner import write_json_atomic
from app.core.errors import ModsError, NoSolution
from app.core.imgproc import load_image, save_image
from app.core.logging_utils import log_error, log_success, log_warning, setup_logging
from app.core.orchestrator import run_mods
from app.core.settings import Settings
from app.schemas.config import SINGLE_DETECTOR_PRESETS, ModsConfig


def _load_config(path: Optional[str], settings: Settings) -> ModsConfig:
    path = path or settings.config_path
    return ModsConfig.from_json_file(path) if path else ModsConfig.default()


def _print_json(payload) -> None:
    sys.stdout.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")


def cmd_match(args, settings: Settings) -> int:
    cfg = _load_config(args.config, settings)
    if args.preset:
        cfg = ModsConfig.single(SINGLE_DETECTOR_PRESETS[args.preset], cfg.theta_m, cfg.ransac)
    img1 = load_image(args.image1)
    img2 = load_image(args.image2)
    seed = settings.seed if args.seed is None else args.seed
    threads = settings.threads if args.threads is None else args.threads

    try:
        report = run_mods(img1, img2, cfg, threads=threads, seed=seed)
    except NoSolution as e:
        report = e.report
        log_warning(str(e))

    payload = report.model_dump(mode="json")
    if args.out:
        write_json_atomic(args.out, payload)
        log_success(f"报告已写入 {args.out}")
    else:
        _print_json(payload)
    if args.overlay:
        save_image(args.overlay, render_overlay(img1, img2, report))
        log_success(f"叠加图已写入 {args.overlay}")
    return 0 if report.solved else 1


def _bench_configs(args, settings: Settings) -> Dict[str, ModsConfig]:
    configs: Dict[str, ModsConfig] = {}
    for name in args.preset or []:
        configs[name] = ModsConfig.single(SINGLE_DETECTOR_PRESETS[name])
    if args.config or settings.config_path or not configs:
        configs["MODS"] = _load_config(args.config, settings)
    return configs


def cmd_bench_warp(args, settings: Settings) -> int:
    threads = settings.threads if args.threads is None else args.threads
    run_warp_bench(args.image_dir, _bench_configs(args, settings), args.out, threads=threads,
                   latitudes=args.latitudes or LATITUDES,
                   seed=settings.seed if args.seed is None else args.seed)
    return 0


def cmd_bench_pairs(args, settings: Settings) -> int:
    threads = settings.threads if args.threads is None else args.threads
    run_pairs_bench(args.pairs_dir, _load_config(args.config, settings), args.out, threads=threads,
                    seed=settings.seed if args.seed is None else args.seed)
    return 0


def cmd_bench_score(args, settings: Settings) -> int:
    score = score_report_file(args.report, args.gt, kind=args.kind, min_correct=args.min_correct)
    _print_json(score.model_dump(mode="json"))
    return 0 if score.solved else 1


def cmd_config(args, settings: Settings) -> int:
    _print_json(_load_config(None, settings).model_dump(mode="json"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="MODS 宽基线双视图匹配")
    parser.add_argument("--log-level", default=None, help="日志级别（默认读取 MODS_LOG_LEVEL）")
    sub = parser.add_subparsers(dest="command", required=True)

    match = sub.add_parser("match", help="匹配两幅图像")
    match.add_argument("image1", help="图1路径")
    match.add_argument("image2", help="图2路径")
    match.add_argument("--config", help="ModsConfig JSON 文件")
    match.add_argument("--preset", choices=sorted(SINGLE_DETECTOR_PRESETS), help="单检测器预设（不升级）")
    match.add_argument("--out", help="报告输出路径，缺省时打印到 stdout")
    match.add_argument("--overlay", help="叠加图 PNG 输出路径")
    match.add_argument("--seed", type=int, default=None, help="RANSAC 随机种子")
    match.add_argument("--threads", type=int, default=None, help="视图流水线线程数")
    match.set_defaults(func=cmd_match)

    bench = sub.add_parser("bench", help="评测")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)

    warp = bench_sub.add_parser("warp", help="合成倾斜评测")
    warp.add_argument("image_dir", help="纹理图目录")
    warp.add_argument("--out", required=True, help="结果 CSV")
    warp.add_argument("--config", help="ModsConfig JSON 文件")
    warp.add_argument("--preset", action="append", choices=sorted(SINGLE_DETECTOR_PRESETS),
                      help="额外评测的单检测器预设，可重复")
    warp.add_argument("--latitudes", type=float, nargs="+", help="纬度列表（度）")
    warp.add_argument("--seed", type=int, default=None)
    warp.add_argument("--threads", type=int, default=None, help="并行用例数")
    warp.set_defaults(func=cmd_bench_warp)

    pairs = bench_sub.add_parser("pairs", help="带真值的图像对评测")
    pairs.add_argument("pairs_dir", help="图像对目录（每个子目录 img1/img2 + H.txt|F.txt|camera.json）")
    pairs.add_argument("--out", required=True, help="结果 CSV")
    pairs.add_argument("--config", help="ModsConfig JSON 文件")
    pairs.add_argument("--seed", type=int, default=None)
    pairs.add_argument("--threads", type=int, default=None, help="并行用例数")
    pairs.set_defaults(func=cmd_bench_pairs)

    score = bench_sub.add_parser("score", help="对报告 JSON 按真值评分")
    score.add_argument("report", help="报告 JSON")
    score.add_argument("--gt", required=True, help="真值矩阵文本文件")
    score.add_argument("--kind", choices=["homography", "affine", "fundamental"], default="homography")
    score.add_argument("--min-correct", type=int, default=None, help="最少正确对应数")
    score.set_defaults(func=cmd_bench_score)

    config = sub.add_parser("config", help="打印默认配置")
    config.set_defaults(func=cmd_config)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = Settings.from_env()
    setup_logging(args.log_level or settings.log_level)
    try:
        return args.func(args, settings)
    except ModsError as e:
        log_error(str(e))
        return 2


if __name__ == "__main__":
    sys.exit(main())
