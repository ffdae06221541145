# 检测器层级与帧反投影
from typing import Callable, Dict, List, Optional

from app.core.features.dog import detect_dog
from app.core.features.fast import detect_fast
from app.core.features.frames import AffineFrame, frame_record, rank_frames, reproject_frames
from app.core.features.hessaff import detect_hessaff
from app.core.imgproc import Image
from app.schemas.config import DetectorParams, DetectorTier

DETECTORS: Dict[DetectorTier, Callable[..., List[AffineFrame]]] = {
    DetectorTier.FAST: detect_fast,
    DetectorTier.DOG: detect_dog,
    DetectorTier.HESSAFF: detect_hessaff,
}


def detect(img: Image, tier: DetectorTier, params: Optional[DetectorParams] = None) -> List[AffineFrame]:
    """按层级分派检测器"""
    return DETECTORS[tier](img, params)


__all__ = [
    "AffineFrame",
    "DETECTORS",
    "detect",
    "detect_dog",
    "detect_fast",
    "detect_hessaff",
    "frame_record",
    "rank_frames",
    "reproject_frames",
]
