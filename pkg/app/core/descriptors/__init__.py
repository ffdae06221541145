# 补丁归一化、RootSIFT、BRIEF 与主方向
from app.core.descriptors.base import DescribedFeature, Descriptor
from app.core.descriptors.extractor import (
    brief,
    describe_frames,
    descriptor_matrix,
    reproject_features,
    root_sift,
)
from app.core.descriptors.patches import dominant_orientations, normalize_patch, normalize_patches

__all__ = [
    "DescribedFeature",
    "Descriptor",
    "brief",
    "describe_frames",
    "descriptor_matrix",
    "dominant_orientations",
    "normalize_patch",
    "normalize_patches",
    "reproject_features",
    "root_sift",
]
