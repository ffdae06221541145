from app.core.verify.solvers.fundamental import eight_point, enforce_rank2, sampson_errors, seven_point
from app.core.verify.solvers.homography import (
    dlt_homography,
    has_collinear_triple,
    homography_errors,
    homography_minimal,
    normalize_points,
)

__all__ = [
    "dlt_homography",
    "eight_point",
    "enforce_rank2",
    "has_collinear_triple",
    "homography_errors",
    "homography_minimal",
    "normalize_points",
    "sampson_errors",
    "seven_point",
]
