# 图像容器与基本变换
from app.core.imgproc.image import Image, decode_image, load_image, save_image
from app.core.imgproc.transforms import (
    SIGMA_BASE,
    downsample,
    gaussian_blur,
    oriented_gaussian_blur,
    sample_bilinear,
    scale_back_map,
    warp_affine,
)

__all__ = [
    "Image",
    "decode_image",
    "load_image",
    "save_image",
    "SIGMA_BASE",
    "downsample",
    "gaussian_blur",
    "oriented_gaussian_blur",
    "sample_bilinear",
    "scale_back_map",
    "warp_affine",
]
