"""
特征描述

把检测器输出的帧变成 DescribedFeature：RootSift 帧先估计主方向（每个方向一个特征），
Binary 帧的旋转已包含在形状中，方向记为 0。
"""

import math
from typing import Dict, List

import numpy as np

from app.core.descriptors.base import DescribedFeature, Descriptor
from app.core.descriptors.brief import PATCH_SIZE as BRIEF_SIZE
from app.core.descriptors.brief import brief_batch
from app.core.descriptors.patches import MAGNIFICATION, dominant_orientations, normalize_patches
from app.core.descriptors.rootsift import PATCH_SIZE as SIFT_SIZE
from app.core.descriptors.rootsift import root_sift_batch
from app.core.features.frames import AffineFrame, reproject_frame
from app.core.geometry import rotation2d
from app.core.imgproc import Image, gaussian_blur
from app.schemas.config import DescriptorKind


def root_sift(patch: np.ndarray) -> Descriptor:
    """单个补丁的 RootSIFT 描述子"""
    return Descriptor(DescriptorKind.ROOT_SIFT, root_sift_batch(np.asarray(patch)[None])[0])


def brief(patch: np.ndarray) -> Descriptor:
    """单个 32×32 补丁的 BRIEF 描述子"""
    return Descriptor(DescriptorKind.BINARY, brief_batch(np.asarray(patch)[None])[0])


def _sampling_bucket(frame: AffineFrame, size: int) -> int:
    """补丁采样间距所在的 2 的幂区间，用于选择抗混叠模糊"""
    spacing = frame.axes[0] * 2.0 * MAGNIFICATION / (size - 1)
    if spacing < 2.0:
        return 0
    return int(math.floor(math.log2(spacing)))


def _grouped_patches(img: Image, frames: List[AffineFrame], lafs: np.ndarray, size: int) -> np.ndarray:
    """按采样间距分组，从适度模糊的图像上采样补丁"""
    buckets: Dict[int, List[int]] = {}
    for i, frame in enumerate(frames):
        buckets.setdefault(_sampling_bucket(frame, size), []).append(i)
    centers = np.array([f.center for f in frames])
    patches = np.empty((len(frames), size, size))
    for bucket, members in sorted(buckets.items()):
        source = img if bucket == 0 else gaussian_blur(img, 0.5 * 2 ** bucket, 0.5 * 2 ** bucket)
        idx = np.array(members)
        patches[idx] = normalize_patches(source.data, centers[idx], lafs[idx], size)
    return patches


def describe_frames(img: Image, frames: List[AffineFrame], kind: DescriptorKind) -> List[DescribedFeature]:
    """
    描述一个视图上的全部帧

    Args:
        img: 检测所用的视图图像
        frames: 视图坐标下的帧
        kind: 描述子类型

    Returns:
        DescribedFeature 列表（视图坐标），顺序跟随帧顺序
    """
    if not frames:
        return []
    shapes = np.array([f.shape for f in frames])

    if kind == DescriptorKind.BINARY:
        vectors = brief_batch(_grouped_patches(img, frames, shapes, BRIEF_SIZE))
        return [DescribedFeature(frame, Descriptor(kind, vec), 0.0) for frame, vec in zip(frames, vectors)]

    upright = _grouped_patches(img, frames, shapes, SIFT_SIZE)
    owners: List[int] = []
    angles: List[float] = []
    for i, patch in enumerate(upright):
        for angle in dominant_orientations(patch):
            owners.append(i)
            angles.append(angle)
    owner_frames = [frames[i] for i in owners]
    lafs = np.array([frames[i].shape @ rotation2d(a) for i, a in zip(owners, angles)])
    vectors = root_sift_batch(_grouped_patches(img, owner_frames, lafs, SIFT_SIZE))
    return [DescribedFeature(frame, Descriptor(kind, vec), angle)
            for frame, vec, angle in zip(owner_frames, vectors, angles)]


def reproject_features(features: List[DescribedFeature], view) -> List[DescribedFeature]:
    """把视图坐标下的特征反投影到原图，中心落在原图外的被丢弃"""
    out = []
    for feature in features:
        frame = reproject_frame(feature.frame, view.back_map, view.view_id, view.source_size)
        if frame is not None:
            out.append(DescribedFeature(frame, feature.descriptor, feature.orientation))
    return out


def descriptor_matrix(features: List[DescribedFeature]) -> np.ndarray:
    """堆叠描述子数据，RootSift 为 (N,128) 浮点，Binary 为 (N,32) uint8"""
    return np.array([f.descriptor.data for f in features])
