#!/usr/bin/env python3
"""
合成倾斜数据集生成脚本

对输入目录中的每幅纹理图生成纬度序列的水平压缩视图，
并把真值仿射（源图坐标 → 扭曲图坐标，2×3）写成 A.txt。
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np
from tqdm import tqdm

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from app.core.bench.runner import list_images  # noqa: E402
from app.core.bench.warp import LATITUDES, make_warp_series  # noqa: E402
from app.core.errors import ImageTooSmall  # noqa: E402
from app.core.imgproc import load_image, save_image  # noqa: E402


def generate_for_image(path: Path, output_dir: str, latitudes) -> int:
    """
    生成一幅源图的倾斜序列

    Args:
        path: 源图路径
        output_dir: 输出根目录，每幅源图一个子目录
        latitudes: 纬度列表（度）

    Returns:
        写出的样本数
    """
    source = load_image(str(path))
    target = os.path.join(output_dir, path.stem)
    os.makedirs(target, exist_ok=True)
    save_image(os.path.join(target, "source.png"), source)

    cases = make_warp_series(source, latitudes)
    for case in cases:
        name = f"lat{case.latitude:g}"
        save_image(os.path.join(target, f"{name}.png"), case.warped)
        np.savetxt(os.path.join(target, f"{name}_A.txt"), case.affine, fmt="%.12f")
    return len(cases)


def main():
    """主函数"""
    parser = argparse.ArgumentParser(description="生成合成倾斜数据集")
    parser.add_argument("input_dir", type=str, help="纹理图目录")
    parser.add_argument("--output-dir", type=str, default="./data/warp", help="输出目录")
    parser.add_argument("--latitudes", type=float, nargs="+", default=list(LATITUDES), help="纬度列表（度）")
    args = parser.parse_args()

    os.makedirs(args.output_dir, exist_ok=True)
    total = 0
    for path in tqdm(list_images(args.input_dir), desc="生成倾斜序列"):
        try:
            total += generate_for_image(path, args.output_dir, args.latitudes)
        except ImageTooSmall as e:
            print(f"跳过 {path.name}: {e}")

    print(f"数据集已保存到 {args.output_dir}")
    print(f"共 {total} 个样本")


if __name__ == "__main__":
    main()
